#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pettis/exponent.hpp"

namespace pettis {

/// ℓ_p direct sum of finite-dimensional coordinate blocks E_n.
class BlockLayout {
public:
    BlockLayout(NormExponent p, std::vector<std::uint64_t> dims);

    /// dims(n) = 2^n for n = 1..depth.
    static std::shared_ptr<const BlockLayout> dyadic(NormExponent p, int depth);
    static std::shared_ptr<const BlockLayout> make(NormExponent p, std::vector<std::uint64_t> dims);

    NormExponent p() const noexcept { return p_; }
    bool has_level(int n) const noexcept;
    std::uint64_t dim(int n) const;
    int max_level() const noexcept { return static_cast<int>(dims_.size()) - 1; }

    friend bool operator==(const BlockLayout&, const BlockLayout&) = default;

private:
    NormExponent p_;
    std::vector<std::uint64_t> dims_;  // dims_[n]; 0 marks an absent level
};

using LayoutPtr = std::shared_ptr<const BlockLayout>;

/// Consecutive coordinates k = first .. first + count - 1 sharing one value.
struct CoordRun {
    std::uint64_t first = 1;
    std::uint64_t count = 1;
    double value = 0.0;

    std::uint64_t end() const noexcept { return first + count; }
    friend bool operator==(const CoordRun&, const CoordRun&) = default;
};

struct Coordinate {
    int n = 0;
    std::uint64_t k = 1;
    double value = 0.0;
};

/// Sparse element of the ℓ_p sum of blocks. Coefficients are stored as runs
/// of equal values per level; no zero is ever stored and adjacent runs with
/// equal values are merged, so equal vectors compare equal structurally.
class BlockVector {
public:
    explicit BlockVector(LayoutPtr layout);

    /// Entries may repeat or overlap; overlapping contributions are summed.
    static BlockVector from_runs(LayoutPtr layout, std::vector<std::pair<int, CoordRun>> runs);
    static BlockVector from_coords(LayoutPtr layout, const std::vector<Coordinate>& coords);

    const BlockLayout& layout() const noexcept { return *layout_; }
    const LayoutPtr& layout_ptr() const noexcept { return layout_; }
    const std::map<int, std::vector<CoordRun>>& levels() const noexcept { return levels_; }

    bool empty() const noexcept { return levels_.empty(); }
    double coefficient(int n, std::uint64_t k) const;
    std::uint64_t nonzero_count() const noexcept;
    std::vector<Coordinate> coordinates() const;

    friend bool operator==(const BlockVector& a, const BlockVector& b);

private:
    LayoutPtr layout_;
    std::map<int, std::vector<CoordRun>> levels_;
};

double norm(const BlockVector& v);
/// ℓ_p norm of a single level block.
double block_norm(const BlockVector& v, int n);
BlockVector project_block(const BlockVector& v, int n);
BlockVector add(const BlockVector& a, const BlockVector& b);
BlockVector subtract(const BlockVector& a, const BlockVector& b);
BlockVector scale(const BlockVector& a, double t);

/// Finite-support functional acting by coordinate pairing.
class Functional {
public:
    explicit Functional(LayoutPtr layout);
    Functional(LayoutPtr layout, const std::vector<Coordinate>& coords);

    static Functional unit(LayoutPtr layout, int n, std::uint64_t k);

    const BlockLayout& layout() const noexcept { return *layout_; }
    const std::map<std::pair<int, std::uint64_t>, double>& coeffs() const noexcept {
        return coeffs_;
    }
    int max_level() const noexcept;
    /// ℓ_q norm with q the conjugate of the layout exponent.
    double dual_norm() const;

private:
    LayoutPtr layout_;
    std::map<std::pair<int, std::uint64_t>, double> coeffs_;
};

double apply_functional(const Functional& x, const BlockVector& v);

void to_json(nlohmann::json& j, const BlockVector& v);
BlockVector block_vector_from_json(const nlohmann::json& j, LayoutPtr layout);

}  // namespace pettis
