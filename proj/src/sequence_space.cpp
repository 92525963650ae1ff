#include "pettis/sequence_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pettis/errors.hpp"

namespace pettis {

namespace {

constexpr std::uint64_t kMaxSerializedCoords = 1'000'000;

void check_same_layout(const BlockLayout& a, const BlockLayout& b) {
    if (!(a == b)) throw Error(ErrorCode::layout_mismatch, "operands live in different layouts");
}

// Canonical runs for one level: sorted, zero-free, overlaps summed, equal
// neighbours merged.
std::vector<CoordRun> normalize_runs(std::vector<CoordRun> runs) {
    std::erase_if(runs, [](const CoordRun& r) { return r.count == 0; });
    std::sort(runs.begin(), runs.end(),
              [](const CoordRun& a, const CoordRun& b) { return a.first < b.first; });

    bool overlapping = false;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].first < runs[i - 1].end()) overlapping = true;
    }

    std::vector<CoordRun> pieces;
    if (!overlapping) {
        pieces = std::move(runs);
    } else {
        std::vector<std::uint64_t> cuts;
        for (const auto& r : runs) {
            cuts.push_back(r.first);
            cuts.push_back(r.end());
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::size_t next = 0;
        std::vector<const CoordRun*> active;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const auto lo = cuts[c];
            std::erase_if(active, [&](const CoordRun* r) { return r->end() <= lo; });
            while (next < runs.size() && runs[next].first <= lo) active.push_back(&runs[next++]);
            if (active.empty()) continue;
            double sum = 0.0;
            for (const auto* r : active) sum += r->value;
            pieces.push_back({lo, cuts[c + 1] - lo, sum});
        }
    }

    std::vector<CoordRun> out;
    out.reserve(pieces.size());
    for (const auto& r : pieces) {
        if (r.value == 0.0) continue;
        if (!out.empty() && out.back().end() == r.first && out.back().value == r.value) {
            out.back().count += r.count;
        } else {
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace

BlockLayout::BlockLayout(NormExponent p, std::vector<std::uint64_t> dims)
    : p_(p), dims_(std::move(dims)) {
    if (dims_.empty()) dims_.push_back(0);
}

std::shared_ptr<const BlockLayout> BlockLayout::dyadic(NormExponent p, int depth) {
    if (depth < 1 || depth > 62) {
        throw Error(ErrorCode::invalid_argument, "dyadic layout depth must lie in [1, 62]");
    }
    std::vector<std::uint64_t> dims(static_cast<std::size_t>(depth) + 1, 0);
    for (int n = 1; n <= depth; ++n) dims[static_cast<std::size_t>(n)] = std::uint64_t{1} << n;
    return std::make_shared<const BlockLayout>(p, std::move(dims));
}

std::shared_ptr<const BlockLayout> BlockLayout::make(NormExponent p,
                                                     std::vector<std::uint64_t> dims) {
    return std::make_shared<const BlockLayout>(p, std::move(dims));
}

bool BlockLayout::has_level(int n) const noexcept {
    return n >= 0 && n <= max_level() && dims_[static_cast<std::size_t>(n)] > 0;
}

std::uint64_t BlockLayout::dim(int n) const {
    if (!has_level(n)) {
        throw Error(ErrorCode::level_out_of_range, "level " + std::to_string(n) + " not in layout");
    }
    return dims_[static_cast<std::size_t>(n)];
}

BlockVector::BlockVector(LayoutPtr layout) : layout_(std::move(layout)) {
    if (!layout_) throw Error(ErrorCode::invalid_argument, "null layout");
}

BlockVector BlockVector::from_runs(LayoutPtr layout, std::vector<std::pair<int, CoordRun>> runs) {
    BlockVector v(std::move(layout));
    std::map<int, std::vector<CoordRun>> grouped;
    for (const auto& [n, run] : runs) {
        const auto dim = v.layout_->dim(n);
        if (run.count == 0) continue;
        if (run.first < 1 || run.end() - 1 > dim) {
            throw Error(ErrorCode::out_of_range, "coordinate run outside block " + std::to_string(n));
        }
        grouped[n].push_back(run);
    }
    for (auto& [n, level] : grouped) {
        auto normalized = normalize_runs(std::move(level));
        if (!normalized.empty()) v.levels_.emplace(n, std::move(normalized));
    }
    return v;
}

BlockVector BlockVector::from_coords(LayoutPtr layout, const std::vector<Coordinate>& coords) {
    std::vector<std::pair<int, CoordRun>> runs;
    runs.reserve(coords.size());
    for (const auto& c : coords) runs.push_back({c.n, CoordRun{c.k, 1, c.value}});
    return from_runs(std::move(layout), std::move(runs));
}

double BlockVector::coefficient(int n, std::uint64_t k) const {
    auto it = levels_.find(n);
    if (it == levels_.end()) return 0.0;
    const auto& runs = it->second;
    auto r = std::upper_bound(runs.begin(), runs.end(), k,
                              [](std::uint64_t key, const CoordRun& run) { return key < run.first; });
    if (r == runs.begin()) return 0.0;
    --r;
    return k < r->end() ? r->value : 0.0;
}

std::uint64_t BlockVector::nonzero_count() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [n, runs] : levels_) {
        for (const auto& r : runs) total += r.count;
    }
    return total;
}

std::vector<Coordinate> BlockVector::coordinates() const {
    std::vector<Coordinate> out;
    for (const auto& [n, runs] : levels_) {
        for (const auto& r : runs) {
            for (std::uint64_t k = r.first; k < r.end(); ++k) out.push_back({n, k, r.value});
        }
    }
    return out;
}

bool operator==(const BlockVector& a, const BlockVector& b) {
    return *a.layout_ == *b.layout_ && a.levels_ == b.levels_;
}

namespace {

double runs_norm(NormExponent p, const std::vector<const std::vector<CoordRun>*>& blocks) {
    double largest = 0.0;
    for (const auto* runs : blocks) {
        for (const auto& r : *runs) largest = std::max(largest, std::abs(r.value));
    }
    if (largest == 0.0 || p.is_infinite()) return largest;
    // Scale by the largest entry so high exponents neither overflow nor underflow.
    double sum = 0.0;
    for (const auto* runs : blocks) {
        for (const auto& r : *runs) {
            sum += static_cast<double>(r.count) * std::pow(std::abs(r.value) / largest, p.value());
        }
    }
    return largest * std::pow(sum, 1.0 / p.value());
}

}  // namespace

double norm(const BlockVector& v) {
    std::vector<const std::vector<CoordRun>*> blocks;
    for (const auto& [n, runs] : v.levels()) blocks.push_back(&runs);
    return runs_norm(v.layout().p(), blocks);
}

double block_norm(const BlockVector& v, int n) {
    auto it = v.levels().find(n);
    if (it == v.levels().end()) return 0.0;
    return runs_norm(v.layout().p(), {&it->second});
}

BlockVector project_block(const BlockVector& v, int n) {
    std::vector<std::pair<int, CoordRun>> runs;
    if (auto it = v.levels().find(n); it != v.levels().end()) {
        for (const auto& r : it->second) runs.emplace_back(n, r);
    }
    return BlockVector::from_runs(v.layout_ptr(), std::move(runs));
}

BlockVector add(const BlockVector& a, const BlockVector& b) {
    check_same_layout(a.layout(), b.layout());
    std::vector<std::pair<int, CoordRun>> runs;
    for (const auto* v : {&a, &b}) {
        for (const auto& [n, level] : v->levels()) {
            for (const auto& r : level) runs.emplace_back(n, r);
        }
    }
    return BlockVector::from_runs(a.layout_ptr(), std::move(runs));
}

BlockVector subtract(const BlockVector& a, const BlockVector& b) { return add(a, scale(b, -1.0)); }

BlockVector scale(const BlockVector& a, double t) {
    std::vector<std::pair<int, CoordRun>> runs;
    if (t != 0.0) {
        for (const auto& [n, level] : a.levels()) {
            for (auto r : level) {
                r.value *= t;
                runs.emplace_back(n, r);
            }
        }
    }
    return BlockVector::from_runs(a.layout_ptr(), std::move(runs));
}

Functional::Functional(LayoutPtr layout) : layout_(std::move(layout)) {
    if (!layout_) throw Error(ErrorCode::invalid_argument, "null layout");
}

Functional::Functional(LayoutPtr layout, const std::vector<Coordinate>& coords)
    : Functional(std::move(layout)) {
    for (const auto& c : coords) {
        if (c.k < 1 || c.k > layout_->dim(c.n)) {
            throw Error(ErrorCode::out_of_range, "functional coordinate outside its block");
        }
        coeffs_[{c.n, c.k}] += c.value;
    }
    std::erase_if(coeffs_, [](const auto& entry) { return entry.second == 0.0; });
}

Functional Functional::unit(LayoutPtr layout, int n, std::uint64_t k) {
    return Functional(std::move(layout), {{n, k, 1.0}});
}

int Functional::max_level() const noexcept {
    int top = 0;
    for (const auto& [key, value] : coeffs_) top = std::max(top, key.first);
    return top;
}

double Functional::dual_norm() const {
    const auto q = layout_->p().conjugate();
    double largest = 0.0;
    for (const auto& [key, value] : coeffs_) largest = std::max(largest, std::abs(value));
    if (largest == 0.0 || q.is_infinite()) return largest;
    double sum = 0.0;
    for (const auto& [key, value] : coeffs_) sum += std::pow(std::abs(value) / largest, q.value());
    return largest * std::pow(sum, 1.0 / q.value());
}

double apply_functional(const Functional& x, const BlockVector& v) {
    check_same_layout(x.layout(), v.layout());
    double total = 0.0;
    for (const auto& [key, value] : x.coeffs()) total += value * v.coefficient(key.first, key.second);
    return total;
}

void to_json(nlohmann::json& j, const BlockVector& v) {
    if (v.nonzero_count() > kMaxSerializedCoords) {
        throw Error(ErrorCode::invalid_argument, "vector too large to serialize coordinatewise");
    }
    auto coeffs = nlohmann::json::object();
    for (const auto& c : v.coordinates()) {
        coeffs[std::to_string(c.n) + "," + std::to_string(c.k)] = c.value;
    }
    j = nlohmann::json{{"p", v.layout().p()}, {"coeffs", std::move(coeffs)}};
}

BlockVector block_vector_from_json(const nlohmann::json& j, LayoutPtr layout) {
    try {
        if (!(j.at("p").get<NormExponent>() == layout->p())) {
            throw Error(ErrorCode::layout_mismatch, "vector exponent differs from layout");
        }
        std::vector<Coordinate> coords;
        for (const auto& [key, value] : j.at("coeffs").items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) {
                throw Error(ErrorCode::config_error, "bad coordinate key '" + key + "'");
            }
            coords.push_back({std::stoi(key.substr(0, comma)), std::stoull(key.substr(comma + 1)),
                              value.get<double>()});
        }
        return BlockVector::from_coords(std::move(layout), coords);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_error, std::string("block vector: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(ErrorCode::config_error, std::string("block vector: ") + e.what());
    }
}

}  // namespace pettis
