#pragma once

// Tabulated surrogate of Jacob's ladder.
//
// phi(t) = anchor + integral_{t0}^{t} Z~^2(u) du, so d phi = Z~^2 dt holds
// exactly and every change-of-variables identity built on the ladder is exact
// up to quadrature error. The table stores phi at uniformly spaced nodes;
// between nodes phi is evaluated by a fresh quadrature from the left node, and
// a monotone cubic through (phi_i, t_i) seeds the inverse.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metazeta/numerics.hpp"
#include "metazeta/zeta.hpp"

namespace metazeta {

// Widest admissible node spacing; resolves the |zeta(1/2+it)|^2 oscillation
// at heights up to 1e5.
inline constexpr double kMaxLadderResolution = 0.05;

// (2 + ln 2 pi - 2 gamma): mean deficit of Z~^2 below 1, times ln t.
double default_anchor_deficit();

class LadderTable {
public:
    LadderTable(std::vector<double> grid, std::vector<double> phi, std::vector<double> z_tilde_sq, double resolution,
                EvalConfig cfg);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& phi() const { return phi_; }
    const std::vector<double>& z_tilde_sq() const { return z_tilde_sq_; }
    double resolution() const { return resolution_; }
    const EvalConfig& config() const { return cfg_; }

    double t_lo() const { return grid_.front(); }
    double t_hi() const { return grid_.back(); }
    double phi_lo() const { return phi_.front(); }
    double phi_hi() const { return phi_.back(); }
    double anchor_t() const { return grid_.front(); }
    double anchor_phi() const { return phi_.front(); }
    // Degree of the interpolant used to seed inversion.
    int interpolation_order() const { return 3; }

    // Initial guess for phi^{-1}(y).
    double inverse_guess(double y) const { return inverse_guess_(y); }

    bool operator==(const LadderTable& other) const;

private:
    std::vector<double> grid_;
    std::vector<double> phi_;
    std::vector<double> z_tilde_sq_;
    double resolution_ = kMaxLadderResolution;
    EvalConfig cfg_;
    numerics::MonotoneCubic inverse_guess_;
};

struct LadderBuildOptions {
    // Explicit anchor value phi(t_lo). When unset, the default deficit formula
    // is used and lowered as needed so that phi(t) < t on the whole table.
    std::optional<double> anchor_phi;
    // Worker threads for panel quadrature; 0 picks hardware concurrency.
    unsigned threads = 0;
};

LadderTable build_ladder(double t_lo, double t_hi, double resolution, const EvalConfig& cfg,
                         const LadderBuildOptions& options = {});

double phi1(const LadderTable& table, double t);

// lo, the grid nodes strictly inside (lo, hi), and hi; panels for quadratures
// over ladder-derived integrands.
std::vector<double> grid_breakpoints(const LadderTable& table, double lo, double hi);

// phi applied j times.
double phi1_iterate(const LadderTable& table, double t, int j);

double phi1_inv(const LadderTable& table, double y);

struct IteratedInterval {
    int r = 0;
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains_strictly(double x) const { return x > lo && x < hi; }
};

// The r-th reverse iterate of `base` (which must have r == 0).
IteratedInterval reverse_interval(const LadderTable& table, const IteratedInterval& base, int r);

// Cache format: CSV rows "t,phi,z_tilde_sq" (%.17g, bit-exact reload) plus a
// JSON sidecar "<csv>.json" holding anchor, resolution, configuration and the
// SHA-256 of the CSV.
void save_ladder(const LadderTable& table, const std::filesystem::path& csv_path);
LadderTable load_ladder(const std::filesystem::path& csv_path);

// SHA-256 of the CSV serialisation; identifies a table in manifests.
std::string ladder_checksum(const LadderTable& table);

}  // namespace metazeta
