#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pettis/campaigns.hpp"
#include "pettis/carriers.hpp"
#include "pettis/config.hpp"
#include "pettis/errors.hpp"
#include "pettis/interval.hpp"
#include "pettis/psi.hpp"
#include "pettis/report.hpp"
#include "pettis/sampling.hpp"
#include "pettis/sequence_space.hpp"

using namespace pettis;

namespace {

Config shipped(const char* name) { return load_config(std::string(PETTIS_SOURCE_DIR) + "/configs/" + name); }

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == name) return i;
    }
    throw Error(ErrorCode::invalid_argument, "no column " + name);
}

double number(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw Error(ErrorCode::invalid_argument, "cell is not numeric");
}

const Cell* summary(const Report& r, const std::string& key) {
    for (const auto& [k, v] : r.summary) {
        if (k == key) return &v;
    }
    return nullptr;
}

const Table* extra(const Report& r, const std::string& name) {
    for (const auto& t : r.extra) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

std::string csv(const Report& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

struct Result {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Result lower_bound() {
    const auto cfg = shipped("lower_bound.json");
    const auto r = run_campaign(cfg);
    const auto rows = r.main.rows.size();
    const bool sized = rows >= 8190 + cfg.campaign.samples;
    return {r.pass() && sized,
            fmt("%zu intervals, %llu violations, min margin %.3g", rows,
                static_cast<unsigned long long>(r.violations), number(*summary(r, "min_margin")))};
}

Result pairing() {
    const auto r = run_campaign(shipped("pairing.json"));
    return {r.pass() && r.main.rows.size() == 100 * 50,
            fmt("%zu pairs, %llu violations, worst err/tol %.3g", r.main.rows.size(),
                static_cast<unsigned long long>(r.violations), number(*summary(r, "worst_err_over_tol")))};
}

Result full_space() {
    const auto cfg = shipped("lower_bound.json");
    const auto m = make_pettis_model(cfg.model);
    double s = 0.0;
    for (int n = 1; n <= 24; ++n) s += std::exp2(-n / 2.0);
    const double oracle = std::sqrt(std::exp2(6.5) * s);
    const auto enc = pettis_integral(m, IntervalSet::full());
    const double rel = std::abs(enc.lower - oracle) / oracle;
    return {rel < 5e-5 && enc.lower <= enc.upper,
            fmt("lower %.10g, oracle %.10g, rel err %.2g", enc.lower, oracle, rel)};
}

Result blowup() {
    const auto r = run_campaign(shipped("blowup.json"));
    const auto jc = column(r.main, "j");
    const auto vc = column(r.main, "lower_over_h");
    double top = INFINITY;
    for (const auto& row : r.main.rows) {
        if (number(row[jc]) == 20) top = std::min(top, number(row[vc]));
    }
    return {r.pass() && top > 32.0 && r.main.rows.size() == 4 * 17,
            fmt("%zu grid points, %llu violations, min at j=20 %.4g", r.main.rows.size(),
                static_cast<unsigned long long>(r.violations), top)};
}

Result halfpower() {
    const auto r = run_campaign(shipped("halfpower.json"));
    const auto* trend = extra(r, "median_trend");
    const auto* flag = summary(r, "trend");
    const bool informative = flag && std::get<std::string>(*flag) == "informative";
    return {r.pass() && trend && !trend->rows.empty() && informative,
            fmt("%zu rows, %llu floor violations, trend table %zu rows (informative)", r.main.rows.size(),
                static_cast<unsigned long long>(r.violations), trend ? trend->rows.size() : std::size_t{0})};
}

Result bochner() {
    const auto r = run_campaign(shipped("bochner.json"));
    const auto sc = column(r.main, "partial_sum");
    bool monotone = true;
    for (std::size_t i = 1; i < r.main.rows.size(); ++i) {
        monotone = monotone && number(r.main.rows[i][sc]) >= number(r.main.rows[i - 1][sc]);
    }
    return {r.pass() && monotone,
            fmt("min S_{N+4}/S_N %.4g, S_24 %.6g, monotone %s", number(*summary(r, "min_growth_ratio")),
                number(*summary(r, "final_sum")), monotone ? "yes" : "no")};
}

Result continuous() {
    const auto r = run_campaign(shipped("continuous.json"));
    const auto* modulus = extra(r, "modulus");
    bool modulus_ok = modulus != nullptr;
    if (modulus) {
        const auto pc = column(*modulus, "pass");
        for (const auto& row : modulus->rows) modulus_ok = modulus_ok && std::get<bool>(row[pc]);
    }
    return {r.pass() && modulus_ok && r.main.rows.size() == 10000,
            fmt("%zu pairs, %llu violations, modulus bound %s", r.main.rows.size(),
                static_cast<unsigned long long>(r.violations), modulus_ok ? "holds" : "fails")};
}

Result growth() {
    const auto good = validate_growth(PsiSpec::power(0.75), 2.0, SequenceRule::affine(1.0));
    const bool ratio_ok = good.pass && std::abs(good.r - std::exp2(-0.25)) <= 1e-12;
    int rejected = 0;
    for (int a = 1; a <= 8; ++a) {
        for (long long b = 0; b <= 4; ++b) {
            if (!validate_growth(PsiSpec::power(0.5), 2.0, SequenceRule::affine(a, b)).pass) ++rejected;
        }
    }
    return {ratio_ok && rejected == 40,
            fmt("power 0.75 r = %.15f, power 0.5 rejected for %d/40 affine rules", good.r, rejected)};
}

Result structure() {
    const auto carriers = verify_disjointness(allocate_carriers(24), 5);

    Rng rng(20240611);
    int inner_bad = 0;
    for (int i = 0; i < 100000; ++i) {
        double a = rng.uniform();
        double b = rng.uniform();
        if (a > b) std::swap(a, b);
        if (a == b) continue;
        const Interval I(a, b);
        const auto d = find_inner_dyadic(I);
        const double lo = std::ldexp(static_cast<double>(d.k - 1), -d.n);
        const double hi = std::ldexp(static_cast<double>(d.k), -d.n);
        if (!(a <= lo && hi <= b && 4.0 * std::ldexp(1.0, -d.n) >= I.measure())) ++inner_bad;
    }

    int norm_bad = 0;
    for (const auto p : {NormExponent(1.0), NormExponent(2.0), NormExponent(4.0), NormExponent::infinity()}) {
        const auto layout = BlockLayout::dyadic(p, 6);
        auto vec = [&] {
            std::vector<Coordinate> c;
            for (auto i = rng.below(0, 8); i > 0; --i) {
                const int n = static_cast<int>(rng.below(1, 6));
                c.push_back({n, rng.below(1, std::uint64_t{1} << n), rng.uniform(-2.0, 2.0)});
            }
            return c;
        };
        for (int i = 0; i < 10000; ++i) {
            const auto a = BlockVector::from_coords(layout, vec());
            const auto b = BlockVector::from_coords(layout, vec());
            const Functional x(layout, vec());
            if (norm(add(a, b)) > (norm(a) + norm(b)) * (1 + 1e-12)) ++norm_bad;
            if (std::abs(apply_functional(x, a)) > x.dual_norm() * norm(a) * (1 + 1e-12) + 1e-15) ++norm_bad;
        }
    }

    const auto cfg = shipped("pairing.json");
    const bool identical = csv(run_campaign(cfg)) == csv(run_campaign(cfg));

    return {carriers.pass && inner_bad == 0 && norm_bad == 0 && identical,
            fmt("depth-24 overlaps %llu, inner-dyadic failures %d, norm/Hoelder failures %d, reruns %s",
                static_cast<unsigned long long>(carriers.violation_count), inner_bad, norm_bad,
                identical ? "identical" : "differ")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
        {"lower bound on intervals", lower_bound},
        {"pairing identity", pairing},
        {"full-space anchor", full_space},
        {"blow-up of lower/h", blowup},
        {"half-power floor", halfpower},
        {"Bochner divergence", bochner},
        {"continuous lower bound and modulus", continuous},
        {"growth validator calibration", growth},
        {"structural properties", structure},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    r.detail.c_str(), secs);
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
