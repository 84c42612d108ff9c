#include "metazeta/ladder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "metazeta/errors.hpp"
#include "metazeta/hash.hpp"
#include "metazeta/json_io.hpp"

namespace metazeta {

namespace {

numerics::QuadratureOptions panel_options(const EvalConfig& cfg, double width)
{
    // Z~^2 is O(1) on average; an absolute floor keeps panels near zeros of Z
    // from being refined needlessly.
    return {.rel_tol = std::min(cfg.quadrature_rel_tol, 1e-13), .abs_tol = 1e-14 * width, .max_intervals = 64};
}

double integrate_z_tilde_sq(double a, double b, const EvalConfig& cfg)
{
    const auto r = numerics::integrate([&](double t) { return z_tilde_sq(t, cfg); }, a, b, panel_options(cfg, b - a));
    return r.value;
}

std::string range_text(double lo, double hi)
{
    return "[" + format_double(lo) + ", " + format_double(hi) + "]";
}

std::string csv_text(const LadderTable& table)
{
    std::string out = "t,phi,z_tilde_sq\n";
    const auto& g = table.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        out += format_double(g[i]);
        out += ',';
        out += format_double(table.phi()[i]);
        out += ',';
        out += format_double(table.z_tilde_sq()[i]);
        out += '\n';
    }
    return out;
}

double parse_double(std::string_view text)
{
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ConfigError("ladder cache: malformed number '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

double default_anchor_deficit()
{
    return 2.0 + std::log(2.0 * std::numbers::pi) - 2.0 * std::numbers::egamma;
}

LadderTable::LadderTable(std::vector<double> grid, std::vector<double> phi, std::vector<double> z_tilde_sq,
                         double resolution, EvalConfig cfg)
    : grid_(std::move(grid)), phi_(std::move(phi)), z_tilde_sq_(std::move(z_tilde_sq)), resolution_(resolution),
      cfg_(cfg)
{
    if (grid_.size() < 2 || phi_.size() != grid_.size() || z_tilde_sq_.size() != grid_.size()) {
        throw ConfigError("ladder: empty or inconsistent table");
    }
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        if (!(grid_[i + 1] > grid_[i])) {
            throw ConsistencyError("ladder: grid not strictly increasing at index " + std::to_string(i));
        }
        if (!(phi_[i + 1] > phi_[i])) {
            throw ConsistencyError("ladder: phi not strictly increasing at t = " + format_double(grid_[i]));
        }
    }
    inverse_guess_ = numerics::MonotoneCubic(phi_, grid_);
}

bool LadderTable::operator==(const LadderTable& other) const
{
    return grid_ == other.grid_ && phi_ == other.phi_ && z_tilde_sq_ == other.z_tilde_sq_ &&
           resolution_ == other.resolution_ && cfg_.working_precision == other.cfg_.working_precision &&
           cfg_.t_min == other.cfg_.t_min && cfg_.quadrature_rel_tol == other.cfg_.quadrature_rel_tol &&
           cfg_.rootfind_abs_tol == other.cfg_.rootfind_abs_tol && cfg_.rs_min_height == other.cfg_.rs_min_height;
}

LadderTable build_ladder(double t_lo, double t_hi, double resolution, const EvalConfig& cfg,
                         const LadderBuildOptions& options)
{
    cfg.validate();
    if (!(t_hi > t_lo)) {
        throw ConfigError("ladder: empty table (t_hi must exceed t_lo)");
    }
    if (t_lo < cfg.t_min) {
        throw ConfigError("ladder: t_lo = " + format_double(t_lo) + " is below t_min = " + format_double(cfg.t_min));
    }
    if (!(resolution > 0.0) || resolution > kMaxLadderResolution) {
        throw ConfigError("ladder: resolution must lie in (0, 0.05]");
    }
    const auto panels = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / resolution));
    std::vector<double> grid(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        grid[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(panels);
    }
    grid.back() = t_hi;

    std::vector<double> panel(panels);
    std::vector<double> nodes(panels + 1);
    unsigned workers = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, panels));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t begin = panels * w / workers;
                const std::size_t end = panels * (w + 1) / workers;
                for (std::size_t i = begin; i < end; ++i) {
                    panel[i] = integrate_z_tilde_sq(grid[i], grid[i + 1], cfg);
                    nodes[i] = z_tilde_sq(grid[i], cfg);
                }
            });
        }
    }
    nodes[panels] = z_tilde_sq(grid[panels], cfg);

    // cumulative integral, compensated
    std::vector<double> cumulative(panels + 1, 0.0);
    numerics::CompensatedSum<double> acc;
    for (std::size_t i = 0; i < panels; ++i) {
        acc.add(panel[i]);
        cumulative[i + 1] = acc.value();
    }

    double anchor = 0.0;
    double excess = -std::numeric_limits<double>::infinity();  // max over nodes of phi(t) - t with anchor 0
    double max_density = 0.0;
    for (std::size_t i = 0; i <= panels; ++i) {
        excess = std::max(excess, cumulative[i] - grid[i]);
        max_density = std::max(max_density, nodes[i]);
    }
    // Between nodes phi - t can exceed its node values by at most h * max(Z~^2).
    const double slack = resolution * std::max(1.0, max_density) + 1.0;
    if (options.anchor_phi) {
        anchor = *options.anchor_phi;
        if (anchor + excess + slack >= 0.0) {
            throw AnchorError("ladder: anchor phi(t0) = " + format_double(anchor) +
                              " gives phi(t) >= t on the table; lower the anchor below " +
                              format_double(-excess - slack));
        }
    } else {
        anchor = t_lo - default_anchor_deficit() * t_lo / std::log(t_lo);
        anchor = std::min(anchor, -excess - slack);
    }

    std::vector<double> phi(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        phi[i] = anchor + cumulative[i];
    }
    return LadderTable(std::move(grid), std::move(phi), std::move(nodes), resolution, cfg);
}

double phi1(const LadderTable& table, double t)
{
    const auto& g = table.grid();
    if (!(t >= table.t_lo() && t <= table.t_hi())) {
        throw RangeError("phi1: t = " + format_double(t) + " outside table range " +
                         range_text(table.t_lo(), table.t_hi()));
    }
    auto it = std::upper_bound(g.begin(), g.end(), t);
    std::size_t i = static_cast<std::size_t>(it - g.begin()) - 1;
    if (i >= g.size() - 1) {
        i = g.size() - 1;
    }
    if (t == g[i]) {
        return table.phi()[i];
    }
    return table.phi()[i] + integrate_z_tilde_sq(g[i], t, table.config());
}

std::vector<double> grid_breakpoints(const LadderTable& table, double lo, double hi)
{
    const auto& g = table.grid();
    std::vector<double> out{lo};
    for (auto it = std::upper_bound(g.begin(), g.end(), lo); it != g.end() && *it < hi; ++it) {
        out.push_back(*it);
    }
    out.push_back(hi);
    return out;
}

double phi1_iterate(const LadderTable& table, double t, int j)
{
    for (int step = 0; step < j; ++step) {
        t = phi1(table, t);
    }
    return t;
}

double phi1_inv(const LadderTable& table, double y)
{
    const auto& p = table.phi();
    if (!(y >= table.phi_lo() && y <= table.phi_hi())) {
        throw RangeError("phi1_inv: y = " + format_double(y) + " outside achievable range " +
                         range_text(table.phi_lo(), table.phi_hi()));
    }
    auto it = std::upper_bound(p.begin(), p.end(), y);
    std::size_t i = static_cast<std::size_t>(it - p.begin()) - 1;
    if (i >= p.size() - 1) {
        return table.t_hi();
    }
    if (y == p[i]) {
        return table.grid()[i];
    }
    const double lo = table.grid()[i];
    const double hi = table.grid()[i + 1];
    const EvalConfig& cfg = table.config();
    auto f = [&](double t) { return phi1(table, t) - y; };
    auto df = [&](double t) { return z_tilde_sq(t, cfg); };
    return numerics::newton_bracketed(f, df, lo, hi, table.inverse_guess(y), cfg.rootfind_abs_tol * 1e-2);
}

IteratedInterval reverse_interval(const LadderTable& table, const IteratedInterval& base, int r)
{
    if (base.r != 0) {
        throw ConfigError("reverse_interval: base interval must have r = 0");
    }
    if (r < 0) {
        throw ConfigError("reverse_interval: depth must be non-negative");
    }
    IteratedInterval out = base;
    for (int depth = 1; depth <= r; ++depth) {
        try {
            out.lo = phi1_inv(table, out.lo);
            out.hi = phi1_inv(table, out.hi);
        } catch (const RangeError& e) {
            throw RangeError("reverse_interval: iterate escapes the table at depth " + std::to_string(depth) + " (" +
                             e.what() + ")");
        }
        out.r = depth;
    }
    return out;
}

std::string ladder_checksum(const LadderTable& table)
{
    return sha256_hex(csv_text(table));
}

void save_ladder(const LadderTable& table, const std::filesystem::path& csv_path)
{
    const std::string csv = csv_text(table);
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            throw ConfigError("ladder cache: cannot write " + csv_path.string());
        }
        out << csv;
    }
    nlohmann::json meta = {
        {"format", "metazeta-ladder/1"},
        {"surrogate", true},
        {"t_lo", table.t_lo()},
        {"t_hi", table.t_hi()},
        {"resolution", table.resolution()},
        {"anchor", {{"t", table.anchor_t()}, {"phi", table.anchor_phi()}}},
        {"interpolation_order", table.interpolation_order()},
        {"rows", table.grid().size()},
        {"config", table.config()},
        {"csv_sha256", sha256_hex(csv)},
    };
    std::ofstream out(csv_path.string() + ".json", std::ios::binary);
    if (!out) {
        throw ConfigError("ladder cache: cannot write sidecar for " + csv_path.string());
    }
    out << meta.dump(2) << '\n';
}

LadderTable load_ladder(const std::filesystem::path& csv_path)
{
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) {
        throw ConfigError("ladder cache: cannot read " + csv_path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string csv = buffer.str();

    std::ifstream side(csv_path.string() + ".json");
    if (!side) {
        throw ConfigError("ladder cache: missing sidecar " + csv_path.string() + ".json");
    }
    nlohmann::json meta;
    try {
        side >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("ladder cache: malformed sidecar: ") + e.what());
    }
    if (meta.value("csv_sha256", std::string()) != sha256_hex(csv)) {
        throw ConfigError("ladder cache: checksum mismatch for " + csv_path.string());
    }

    std::vector<double> grid;
    std::vector<double> phi;
    std::vector<double> zsq;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    if (line != "t,phi,z_tilde_sq") {
        throw ConfigError("ladder cache: unexpected header '" + line + "'");
    }
    while (std::getline(lines, line)) {
        if (line.empty()) {
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw ConfigError("ladder cache: malformed row '" + line + "'");
        }
        const std::string_view view(line);
        grid.push_back(parse_double(view.substr(0, c1)));
        phi.push_back(parse_double(view.substr(c1 + 1, c2 - c1 - 1)));
        zsq.push_back(parse_double(view.substr(c2 + 1)));
    }
    EvalConfig cfg = meta.at("config").get<EvalConfig>();
    return LadderTable(std::move(grid), std::move(phi), std::move(zsq), meta.at("resolution").get<double>(), cfg);
}

}  // namespace metazeta
