#include "metazeta/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "metazeta/errors.hpp"
#include "metazeta/hash.hpp"
#include "metazeta/json_io.hpp"
#include "metazeta/trig.hpp"

namespace metazeta {

namespace {

namespace pt = boost::property_tree;

// Reads typed values out of an INI tree and remembers which keys were used.
class IniReader {
public:
    explicit IniReader(pt::ptree tree) : tree_(std::move(tree)) {}

    template <class T>
    void get(const std::string& section, const std::string& key, T& out)
    {
        const auto text = raw(section, key);
        if (!text) {
            return;
        }
        out = convert<T>(*text, section + "." + key);
    }

    void get(const std::string& section, const std::string& key, std::optional<double>& out)
    {
        const auto text = raw(section, key);
        if (text && !text->empty()) {
            out = convert<double>(*text, section + "." + key);
        }
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key)
    {
        used_.insert(section + "." + key);
        const auto sec = tree_.get_child_optional(section);
        if (!sec) {
            return std::nullopt;
        }
        const auto v = sec->get_optional<std::string>(key);
        if (!v) {
            return std::nullopt;
        }
        return boost::trim_copy(*v);
    }

    void reject_unknown() const
    {
        for (const auto& [section, body] : tree_) {
            if (body.empty() && !body.data().empty()) {
                throw ConfigError("config key '" + section + "' must sit inside a [section]");
            }
            for (const auto& [key, value] : body) {
                if (!used_.count(section + "." + key)) {
                    throw ConfigError("unknown config key " + section + "." + key);
                }
            }
        }
    }

private:
    template <class T>
    static T convert(const std::string& text, const std::string& where)
    {
        if constexpr (std::is_same_v<T, std::string>) {
            return text;
        } else if constexpr (std::is_same_v<T, bool>) {
            const auto lower = boost::to_lower_copy(text);
            if (lower == "true" || lower == "yes" || lower == "1") {
                return true;
            }
            if (lower == "false" || lower == "no" || lower == "0") {
                return false;
            }
            throw ConfigError(where + ": expected true or false, got '" + text + "'");
        } else {
            T value{};
            const auto* end = text.data() + text.size();
            const auto res = std::from_chars(text.data(), end, value);
            if (res.ec != std::errc() || res.ptr != end) {
                throw ConfigError(where + ": cannot read '" + text + "' as a number");
            }
            return value;
        }
    }

    pt::ptree tree_;
    std::set<std::string> used_;
};

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> parts;
    if (boost::trim_copy(text).empty()) {
        return parts;
    }
    boost::split(parts, text, boost::is_any_of(","));
    for (auto& p : parts) {
        boost::trim(p);
    }
    return parts;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep)
{
    return boost::join(parts, sep);
}

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw ConfigError(message);
    }
}

AdmissibleUSet admissible_or_throw(const std::vector<std::string>& u_set)
{
    const auto result = validate_u_set(u_set);
    if (const auto* bad = std::get_if<std::vector<USetViolation>>(&result)) {
        std::vector<std::string> lines;
        for (const auto& v : *bad) {
            lines.push_back(v.constraint + " (" + v.detail + ")");
        }
        throw ConfigError("U-set rejected: " + join(lines, "; "));
    }
    return std::get<AdmissibleUSet>(result);
}

void say(std::ostream* log, const std::string& line)
{
    if (log != nullptr) {
        *log << line << '\n' << std::flush;
    }
}

LadderTable obtain_ladder(const PipelineConfig& cfg, std::ostream* log)
{
    const std::filesystem::path cache = cfg.ladder_cache;
    if (!cfg.ladder_cache.empty() && std::filesystem::exists(cache)) {
        auto table = load_ladder(cache);
        const nlohmann::json want = cfg.eval;
        const nlohmann::json have = table.config();
        const bool anchor_ok = !cfg.anchor_phi || *cfg.anchor_phi == table.anchor_phi();
        if (table.t_lo() == cfg.t_lo && table.t_hi() == cfg.t_hi && table.resolution() == cfg.resolution &&
            want == have && anchor_ok) {
            say(log, "ladder: loaded " + cfg.ladder_cache);
            return table;
        }
        say(log, "ladder: cache " + cfg.ladder_cache + " does not match the configuration, rebuilding");
    }
    say(log, "ladder: building [" + format_double(cfg.t_lo) + ", " + format_double(cfg.t_hi) + "] at step " +
                 format_double(cfg.resolution));
    auto table = build_ladder(cfg.t_lo, cfg.t_hi, cfg.resolution, cfg.eval, {cfg.anchor_phi, 0});
    if (!cfg.ladder_cache.empty()) {
        if (cache.has_parent_path()) {
            std::filesystem::create_directories(cache.parent_path());
        }
        save_ladder(table, cache);
    }
    return table;
}

void check_coverage(const LadderTable& table, const PipelineConfig& cfg, const AdmissibleUSet& u_set)
{
    for (std::size_t n = 1; n <= u_set.size(); ++n) {
        try {
            reverse_interval(table, base_interval(u_set.at(n), cfg.L), cfg.k_max);
        } catch (const RangeError& e) {
            throw ConfigError("ladder range [" + format_double(table.t_lo()) + ", " + format_double(table.t_hi()) +
                              "] does not cover the reverse iterates of U = " + format_double(u_set.at(n)) +
                              " at k = " + std::to_string(cfg.k_max) + "; raise ladder.t_hi (" + e.what() + ")");
        }
    }
}

double median_omega(const LadderTable& table, double U, long L0, int k, int samples)
{
    std::vector<double> v;
    for (long i = 0; i < samples; ++i) {
        v.push_back(omega_interval_bound(table, U, L0 + i, k));
    }
    const auto mid = v.begin() + static_cast<long>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

const MetaRecord* find_meta(const std::vector<MetaRecord>& meta, int eq_id, int k, std::size_t n)
{
    for (const auto& m : meta) {
        if (m.instance.eq_id == eq_id && m.instance.k == k && m.n == n) {
            return &m;
        }
    }
    return nullptr;
}

CrossbreedRecord crossbreed_for(const std::vector<MetaRecord>& meta, const PipelineConfig& cfg, std::size_t n,
                                double U)
{
    const auto [k3, k4, k5, k6] = cfg.depths;
    CrossbreedRecord rec;
    rec.n = n;
    rec.U = U;

    const auto s1 = combine(relation_of(3, k3), relation_of(4, k4), 1, 1);
    const auto s2 = combine(relation_of(5, k5), relation_of(6, k6), 1, 1);
    rec.elimination = eliminate(Atom::graft(11), s1, s2);

    std::set<int> depths{k3, k4, k5, k6};
    std::vector<LinearRelation> identities;
    for (int k : depths) {
        identities.push_back(to_product_form(eliminate(Atom::graft(10), relation_of(1, k), relation_of(2, k))));
    }
    rec.substituted = substitute_denominator(rec.elimination, identities);

    Binding binding;
    std::map<SourceKey, double> residuals;
    std::map<int, const MetaRecord*> by_eq;
    for (int k : depths) {
        for (int l = 1; l <= 6; ++l) {
            const auto* m = find_meta(meta, l, k, n);
            if (m == nullptr) {
                throw AssemblyError("crossbreeding needs equation " + std::to_string(l) + " at k = " +
                                    std::to_string(k));
            }
            merge_binding(binding, binding_of(m->instance, cfg.eval));
            residuals[{l, k}] = m->exact.residual;
        }
    }

    rec.elimination_value = numeric_eval(rec.elimination, binding);
    rec.elimination_tolerance = propagated_tolerance(rec.elimination, residuals);
    bool ok = std::abs(rec.elimination_value) <= rec.elimination_tolerance;

    double drift = 0.0;
    for (int k : depths) {
        const double d = binding.at(Atom::denominator(k));
        const double s = binding.at(Atom::numerator(1, k)) + binding.at(Atom::numerator(2, k));
        const double rel = std::abs(s - d) / d;
        rec.identity_values[k] = rel;
        ok = ok && rel <= cfg.meta.cert_rel_tol;
        for (int l = 3; l <= 6; ++l) {
            const Atom p = Atom::product(l, k);
            if (rec.elimination.terms.count(p)) {
                drift += std::abs(to_double(rec.elimination.coefficient(p))) * binding.at(p) * std::abs(s - d) / s;
            }
        }
    }
    rec.substituted_value = numeric_eval(rec.substituted, binding);
    rec.substituted_tolerance = rec.elimination_tolerance + drift;
    ok = ok && std::abs(rec.substituted_value) <= rec.substituted_tolerance;

    const std::array<std::pair<int, int>, 4> terms{{{3, k3}, {4, k4}, {5, k5}, {6, k6}}};
    std::map<int, double> asym;
    for (const auto& [l, k] : terms) {
        const auto* m = find_meta(meta, l, k, n);
        asym[l] = m->asymptotic.lhs;
        const double w = std::abs(to_double(rec.elimination.coefficient(Atom::product(l, k))));
        rec.asymptotic_tolerance += w * (m->asymptotic.bound + m->asymptotic.extra_residual) + 1e-15;
    }
    rec.asymptotic_left = 2 * (asym[5] + asym[6]) + 1;
    rec.asymptotic_right = 3 * (asym[3] + asym[4]);
    ok = ok && std::abs(rec.asymptotic_left - rec.asymptotic_right) <= rec.asymptotic_tolerance;
    if (const auto* m7 = find_meta(meta, 7, k6, n)) {
        rec.shifted_left = 2 * (asym[6] + m7->asymptotic.lhs) + 1;
    }
    rec.passed = ok;
    return rec;
}

nlohmann::json hashed(nlohmann::json j)
{
    const auto h = content_hash(j);
    j["sha256"] = h;
    return j;
}

}  // namespace

void PipelineConfig::validate() const
{
    eval.validate();
    admissible_or_throw(u_set);
    require(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo < t_hi, "ladder.t_lo must be below ladder.t_hi");
    require(t_lo > eval.t_min, "ladder.t_lo must exceed zeta.t_min = " + format_double(eval.t_min));
    require(resolution > 0.0 && resolution <= kMaxLadderResolution,
            "ladder.resolution must lie in (0, " + format_double(kMaxLadderResolution) + "]");
    require(L > 0, "factorization.L must be positive");
    const double base = std::numbers::pi * static_cast<double>(L);
    require(base > t_lo && base + kUMax < t_hi, "pi L = " + format_double(base) + " must lie inside the ladder range");
    require(k_max >= 1 && k_max <= kDefaultKMax, "factorization.k_max must lie in 1.." + std::to_string(kDefaultKMax));
    require(quadrature_rel_tol > 0.0 && quadrature_rel_tol < 1e-3, "factorization.quadrature_rel_tol must lie in (0, 1e-3)");
    build_strips(sigma1, sigma2, delta);
    require(graft.t_a > 0.0 && graft.t_a < graft.t_b, "grafting.t_a must be positive and below grafting.t_b");
    require(graft.t_b <= graft.t_cap, "grafting.t_b must not exceed grafting.t_cap");
    require(graft.scan_step > 0.0, "grafting.scan_step must be positive");
    require(graft.graft_tol > 0.0, "grafting.graft_tol must be positive");
    require(meta.graft_tol == graft.graft_tol, "meta graft tolerance must equal grafting.graft_tol");
    require(meta.cert_rel_tol > 0.0, "factorization.cert_rel_tol must be positive");
    require(meta.asymptotic_factor > 0.0, "meta.asymptotic_factor must be positive");
    for (int d : depths) {
        require(d >= 1 && d <= k_max, "crossbreed.depths must lie in 1..k_max");
    }
    if (trend) {
        require(trend_factor >= 2, "trend.factor must be at least 2");
        require(trend_k >= 1 && trend_k <= kDefaultKMax, "trend.k must lie in 1.." + std::to_string(kDefaultKMax));
        require(trend_samples >= 1, "trend.samples must be positive");
        require(trend_t_lo < trend_t_hi && trend_t_lo > eval.t_min, "trend.t_lo must be below trend.t_hi");
    }
}

PipelineConfig parse_config(const std::string& ini_text)
{
    pt::ptree tree;
    std::istringstream in(ini_text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    IniReader r(tree);
    PipelineConfig c;
    r.get("zeta", "working_precision", c.eval.working_precision);
    r.get("zeta", "t_min", c.eval.t_min);
    r.get("zeta", "quadrature_rel_tol", c.eval.quadrature_rel_tol);
    r.get("zeta", "rootfind_abs_tol", c.eval.rootfind_abs_tol);
    r.get("zeta", "rs_min_height", c.eval.rs_min_height);

    r.get("ladder", "t_lo", c.t_lo);
    r.get("ladder", "t_hi", c.t_hi);
    r.get("ladder", "resolution", c.resolution);
    r.get("ladder", "anchor_phi", c.anchor_phi);
    r.get("ladder", "cache", c.ladder_cache);

    r.get("factorization", "L", c.L);
    if (const auto u = r.raw("factorization", "u_set")) {
        c.u_set = split_list(*u);
    }
    r.get("factorization", "k_max", c.k_max);
    r.get("factorization", "quadrature_rel_tol", c.quadrature_rel_tol);
    r.get("factorization", "cert_rel_tol", c.meta.cert_rel_tol);

    r.get("grafting", "sigma1", c.sigma1);
    r.get("grafting", "sigma2", c.sigma2);
    r.get("grafting", "delta", c.delta);
    r.get("grafting", "t_a", c.graft.t_a);
    r.get("grafting", "t_b", c.graft.t_b);
    r.get("grafting", "t_cap", c.graft.t_cap);
    r.get("grafting", "escalate", c.graft.escalate);
    r.get("grafting", "scan_step", c.graft.scan_step);
    r.get("grafting", "graft_tol", c.graft.graft_tol);
    c.meta.graft_tol = c.graft.graft_tol;

    r.get("meta", "asymptotic_factor", c.meta.asymptotic_factor);

    r.get("trend", "enabled", c.trend);
    r.get("trend", "factor", c.trend_factor);
    r.get("trend", "k", c.trend_k);
    r.get("trend", "samples", c.trend_samples);
    r.get("trend", "t_lo", c.trend_t_lo);
    r.get("trend", "t_hi", c.trend_t_hi);

    r.get("crossbreed", "enabled", c.crossbreed);
    if (const auto d = r.raw("crossbreed", "depths")) {
        const auto parts = split_list(*d);
        require(parts.size() == 4, "crossbreed.depths needs four values (sin^4, cos^4, sin^6, cos^6)");
        for (std::size_t i = 0; i < 4; ++i) {
            int v = 0;
            const auto res = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v);
            require(res.ec == std::errc() && res.ptr == parts[i].data() + parts[i].size(),
                    "crossbreed.depths: cannot read '" + parts[i] + "'");
            c.depths[i] = v;
        }
    }

    r.get("output", "directory", c.output_dir);
    r.reject_unknown();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    auto cfg = parse_config(ss.str());
    // relative paths resolve against the config file
    const auto base = path.parent_path();
    if (!cfg.ladder_cache.empty() && std::filesystem::path(cfg.ladder_cache).is_relative()) {
        cfg.ladder_cache = (base / cfg.ladder_cache).lexically_normal().string();
    }
    if (std::filesystem::path(cfg.output_dir).is_relative()) {
        cfg.output_dir = (base / cfg.output_dir).lexically_normal().string();
    }
    return cfg;
}

std::string render_config(const PipelineConfig& c)
{
    std::ostringstream o;
    auto b = [](bool v) { return v ? "true" : "false"; };
    o << "[zeta]\n"
      << "working_precision = " << c.eval.working_precision << '\n'
      << "t_min = " << format_double(c.eval.t_min) << '\n'
      << "quadrature_rel_tol = " << format_double(c.eval.quadrature_rel_tol) << '\n'
      << "rootfind_abs_tol = " << format_double(c.eval.rootfind_abs_tol) << '\n'
      << "rs_min_height = " << format_double(c.eval.rs_min_height) << "\n\n"
      << "[ladder]\n"
      << "t_lo = " << format_double(c.t_lo) << '\n'
      << "t_hi = " << format_double(c.t_hi) << '\n'
      << "resolution = " << format_double(c.resolution) << '\n'
      << "anchor_phi = " << (c.anchor_phi ? format_double(*c.anchor_phi) : "") << '\n'
      << "cache = " << c.ladder_cache << "\n\n"
      << "[factorization]\n"
      << "L = " << c.L << '\n'
      << "u_set = " << join(c.u_set, ", ") << '\n'
      << "k_max = " << c.k_max << '\n'
      << "quadrature_rel_tol = " << format_double(c.quadrature_rel_tol) << '\n'
      << "cert_rel_tol = " << format_double(c.meta.cert_rel_tol) << "\n\n"
      << "[grafting]\n"
      << "sigma1 = " << format_double(c.sigma1) << '\n'
      << "sigma2 = " << format_double(c.sigma2) << '\n'
      << "delta = " << format_double(c.delta) << '\n'
      << "t_a = " << format_double(c.graft.t_a) << '\n'
      << "t_b = " << format_double(c.graft.t_b) << '\n'
      << "t_cap = " << format_double(c.graft.t_cap) << '\n'
      << "escalate = " << b(c.graft.escalate) << '\n'
      << "scan_step = " << format_double(c.graft.scan_step) << '\n'
      << "graft_tol = " << format_double(c.graft.graft_tol) << "\n\n"
      << "[meta]\n"
      << "asymptotic_factor = " << format_double(c.meta.asymptotic_factor) << "\n\n"
      << "[trend]\n"
      << "enabled = " << b(c.trend) << '\n'
      << "factor = " << c.trend_factor << '\n'
      << "k = " << c.trend_k << '\n'
      << "samples = " << c.trend_samples << '\n'
      << "t_lo = " << format_double(c.trend_t_lo) << '\n'
      << "t_hi = " << format_double(c.trend_t_hi) << "\n\n"
      << "[crossbreed]\n"
      << "enabled = " << b(c.crossbreed) << '\n'
      << "depths = " << c.depths[0] << ", " << c.depths[1] << ", " << c.depths[2] << ", " << c.depths[3] << "\n\n"
      << "[output]\n"
      << "directory = " << c.output_dir << '\n';
    return o.str();
}

void to_json(nlohmann::json& j, const PipelineConfig& c)
{
    j = {{"zeta", c.eval},
         {"ladder",
          {{"t_lo", c.t_lo},
           {"t_hi", c.t_hi},
           {"resolution", c.resolution},
           {"anchor_phi", c.anchor_phi ? nlohmann::json(*c.anchor_phi) : nlohmann::json()}}},
         {"factorization",
          {{"L", c.L},
           {"u_set", c.u_set},
           {"k_max", c.k_max},
           {"quadrature_rel_tol", c.quadrature_rel_tol},
           {"cert_rel_tol", c.meta.cert_rel_tol}}},
         {"grafting",
          {{"sigma1", c.sigma1},
           {"sigma2", c.sigma2},
           {"delta", c.delta},
           {"t_a", c.graft.t_a},
           {"t_b", c.graft.t_b},
           {"t_cap", c.graft.t_cap},
           {"escalate", c.graft.escalate},
           {"scan_step", c.graft.scan_step},
           {"graft_tol", c.graft.graft_tol}}},
         {"meta", {{"asymptotic_factor", c.meta.asymptotic_factor}}},
         {"trend",
          {{"enabled", c.trend},
           {"factor", c.trend_factor},
           {"k", c.trend_k},
           {"samples", c.trend_samples},
           {"t_lo", c.trend_t_lo},
           {"t_hi", c.trend_t_hi}}},
         {"crossbreed", {{"enabled", c.crossbreed}, {"depths", c.depths}}}};
}

std::string content_hash(const nlohmann::json& j)
{
    return sha256_hex(j.dump());
}

bool RunManifest::passed() const
{
    return failure.empty() && !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

const std::vector<std::string>& report_caveats()
{
    static const std::vector<std::string> caveats{
        "The exact equalities hold for the analytic objects (Jacob's ladder phi_1 and true mean-value points); the "
        "values here hold for the surrogate ladder phi^_1 = anchor + integral of Z~^2 tabulated on a finite range.",
        "The asymptotic forms are limits L -> infinity. They are checked here only as an explicit omega-ratio bound "
        "and a two-point trend at L and a multiple of L, never as a limit.",
        "Z~^2 uses omega(t) = ln t, dropping the O(ln ln t / ln t) factor.",
    };
    return caveats;
}

RunManifest run_pipeline(const PipelineConfig& cfg, std::ostream* log)
{
    cfg.validate();
    const auto u_set = admissible_or_throw(cfg.u_set);

    RunManifest man;
    man.config = cfg;
    const auto table = obtain_ladder(cfg, log);
    man.ladder_checksum = ladder_checksum(table);
    man.ladder_rows = table.grid().size();
    check_coverage(table, cfg, u_set);

    const auto strips = build_strips(cfg.sigma1, cfg.sigma2, cfg.delta);
    FactorizationOptions fopt;
    fopt.k_max = cfg.k_max;
    fopt.quadrature_rel_tol = cfg.quadrature_rel_tol;

    try {
        bool certs_ok = true;
        say(log, "certificates: " + std::to_string(u_set.size() * static_cast<std::size_t>(cfg.k_max) * 9));
        for (std::size_t n = 1; n <= u_set.size(); ++n) {
            for (int k = 1; k <= cfg.k_max; ++k) {
                for (int l = 1; l <= kIntegrandCount; ++l) {
                    auto cert = factorize(l, k, u_set.at(n), cfg.L, table, fopt);
                    const auto rep = verify_certificate(cert, table);
                    const bool ok = rep.passed();
                    certs_ok = certs_ok && ok;
                    man.certificates.push_back(std::move(cert));
                    man.certificate_passed.push_back(ok);
                }
            }
        }
        man.checks["certificates"] = certs_ok;

        say(log, "grafts and meta-equations");
        bool grafts_ok = true;
        bool exact_ok = true;
        bool asym_ok = true;
        std::map<std::pair<std::size_t, int>, Graft> sinc_grafts;
        std::size_t idx = 0;
        for (std::size_t n = 1; n <= u_set.size(); ++n) {
            for (int k = 1; k <= cfg.k_max; ++k) {
                for (int l = 1; l <= kIntegrandCount; ++l) {
                    const auto& cert = man.certificates[idx++];
                    std::vector<Graft> grafts;
                    for (int s : graft_support(l)) {
                        const auto key = std::make_pair(n, s);
                        if (s > kIntegrandCount && sinc_grafts.count(key)) {
                            grafts.push_back(sinc_grafts.at(key));
                            continue;
                        }
                        auto g = find_graft(strips[static_cast<std::size_t>(s - 1)], graft_target(s, &cert, cert.U),
                                            cfg.graft, cfg.eval);
                        g.n = static_cast<int>(n);
                        grafts_ok = grafts_ok && std::abs(g.achieved - g.target) <= cfg.graft.graft_tol;
                        man.grafts.push_back(g);
                        if (s > kIntegrandCount) {
                            sinc_grafts[key] = g;
                        }
                        grafts.push_back(g);
                    }
                    MetaRecord rec;
                    rec.n = n;
                    rec.instance = assemble_meta(l, cert, grafts, cfg.eval);
                    rec.exact = verify_meta(rec.instance, MetaForm::Exact, table, cfg.meta);
                    rec.asymptotic = verify_meta(rec.instance, MetaForm::Asymptotic, table, cfg.meta);
                    exact_ok = exact_ok && rec.exact.passed;
                    asym_ok = asym_ok && rec.asymptotic.passed;
                    man.meta.push_back(std::move(rec));
                }
            }
        }
        man.checks["grafts"] = grafts_ok;
        man.checks["meta_exact"] = exact_ok;
        man.checks["meta_asymptotic"] = asym_ok;

        if (cfg.crossbreed) {
            say(log, "crossbreeding");
            bool ok = true;
            for (std::size_t n = 1; n <= u_set.size(); ++n) {
                man.crossbreeding.push_back(crossbreed_for(man.meta, cfg, n, u_set.at(n)));
                ok = ok && man.crossbreeding.back().passed;
            }
            man.checks["crossbreed"] = ok;
        }

        if (cfg.trend) {
            say(log, "trend: building [" + format_double(cfg.trend_t_lo) + ", " + format_double(cfg.trend_t_hi) + "]");
            PipelineConfig far_cfg = cfg;
            far_cfg.t_lo = cfg.trend_t_lo;
            far_cfg.t_hi = cfg.trend_t_hi;
            far_cfg.ladder_cache.clear();
            const auto far = obtain_ladder(far_cfg, nullptr);
            TrendRecord t;
            t.L = cfg.L;
            t.far_L = cfg.L * cfg.trend_factor;
            t.k = cfg.trend_k;
            const double U = u_set.at(1);
            t.near_median = median_omega(table, U, t.L, t.k, cfg.trend_samples);
            t.far_median = median_omega(far, U, t.far_L, t.k, cfg.trend_samples);
            t.near_scale = 2.0 * t.k / std::log(std::numbers::pi * static_cast<double>(t.L));
            t.far_scale = 2.0 * t.k / std::log(std::numbers::pi * static_cast<double>(t.far_L));
            const auto cert = factorize(6, t.k, U, t.far_L, far, fopt);
            const auto inst = assemble_meta(6, cert, build_support_grafts(cert, strips, 1, cfg.graft, cfg.eval), cfg.eval);
            t.far_instance_passed = verify_meta(inst, MetaForm::Asymptotic, far, cfg.meta).passed;
            t.passed = t.far_median < t.near_median && t.far_scale < t.near_scale && t.far_instance_passed;
            man.trend = t;
            man.checks["trend"] = t.passed;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        man.failure = e.what();
        say(log, std::string("stage failed: ") + e.what());
    }
    return man;
}

nlohmann::json RunManifest::to_json() const
{
    nlohmann::json j;
    j["config"] = config;
    j["config_sha256"] = content_hash(j["config"]);
    j["ladder"] = {{"t_lo", config.t_lo},
                   {"t_hi", config.t_hi},
                   {"resolution", config.resolution},
                   {"rows", ladder_rows},
                   {"checksum", ladder_checksum}};
    j["tolerances"] = {{"certificate_rel", config.meta.cert_rel_tol},
                       {"graft", config.graft.graft_tol},
                       {"quadrature_rel", config.quadrature_rel_tol},
                       {"rootfind_abs", config.eval.rootfind_abs_tol},
                       {"asymptotic_factor", config.meta.asymptotic_factor}};

    auto& certs = j["certificates"] = nlohmann::json::array();
    for (std::size_t i = 0; i < certificates.size(); ++i) {
        auto c = hashed(nlohmann::json(certificates[i]));
        c["passed"] = static_cast<bool>(certificate_passed[i]);
        certs.push_back(c);
    }
    auto& grafts_j = j["grafts"] = nlohmann::json::array();
    for (const auto& g : grafts) {
        grafts_j.push_back(hashed(nlohmann::json(g)));
    }
    auto& meta_j = j["meta"] = nlohmann::json::array();
    for (const auto& m : meta) {
        std::vector<std::string> graft_hashes;
        for (const auto& g : m.instance.grafts) {
            graft_hashes.push_back(content_hash(nlohmann::json(g)));
        }
        meta_j.push_back({{"eq_id", m.instance.eq_id},
                          {"k", m.instance.k},
                          {"n", m.n},
                          {"U", m.instance.U},
                          {"L", m.instance.L},
                          {"certificate_sha256", content_hash(nlohmann::json(m.instance.cert))},
                          {"graft_sha256", graft_hashes},
                          {"binding_hash", m.instance.binding_hash},
                          {"instance", m.instance},
                          {"exact", m.exact},
                          {"asymptotic", m.asymptotic}});
    }
    auto& cross_j = j["crossbreeding"] = nlohmann::json::array();
    for (const auto& c : crossbreeding) {
        nlohmann::json ids = nlohmann::json::object();
        for (const auto& [k, v] : c.identity_values) {
            ids[std::to_string(k)] = v;
        }
        cross_j.push_back({{"n", c.n},
                           {"U", c.U},
                           {"elimination", to_string(c.elimination)},
                           {"elimination_value", c.elimination_value},
                           {"elimination_tolerance", c.elimination_tolerance},
                           {"identity_relative_residual", ids},
                           {"substituted", to_string(c.substituted)},
                           {"substituted_value", c.substituted_value},
                           {"substituted_tolerance", c.substituted_tolerance},
                           {"asymptotic_left", c.asymptotic_left},
                           {"asymptotic_right", c.asymptotic_right},
                           {"asymptotic_tolerance", c.asymptotic_tolerance},
                           {"shifted_left", c.shifted_left},
                           {"passed", c.passed}});
    }
    if (trend) {
        j["trend"] = {{"L", trend->L},
                      {"far_L", trend->far_L},
                      {"k", trend->k},
                      {"near_median_omega", trend->near_median},
                      {"far_median_omega", trend->far_median},
                      {"near_scale", trend->near_scale},
                      {"far_scale", trend->far_scale},
                      {"far_instance_passed", trend->far_instance_passed},
                      {"passed", trend->passed}};
    }
    j["checks"] = checks;
    j["passed"] = passed();
    if (!failure.empty()) {
        j["failure"] = failure;
    }
    j["caveats"] = report_caveats();
    j["headline"] = headline_json(j);
    return j;
}

nlohmann::json headline_json(const nlohmann::json& man)
{
    nlohmann::json h = {{"caveats", report_caveats()}};
    const auto depths = man.at("config").at("crossbreed").at("depths").get<std::array<int, 4>>();
    const nlohmann::json* cos6 = nullptr;
    for (const auto& m : man.at("meta")) {
        if (m.at("eq_id") == 6 && m.at("k") == depths[3] && m.at("n") == 1) {
            cos6 = &m;
        }
    }
    if (cos6 != nullptr) {
        const auto& a = cos6->at("asymptotic");
        const auto& inst = cos6->at("instance");
        nlohmann::json w = nlohmann::json::object();
        for (const auto& g : inst.at("grafts")) {
            w["w" + std::to_string(g.at("l").get<int>())] = g.at("w");
        }
        h["cos6"] = {{"statement", "|zeta(w6)| prod Z^2(alpha)/Z^2(beta) ~ 5/16 + 15/32 |zeta(w10)| + "
                                   "3/16 |zeta(w11)| + 1/32 |zeta(w12)|"},
                     {"U", cos6->at("U")},
                     {"L", cos6->at("L")},
                     {"k", cos6->at("k")},
                     {"grafts", w},
                     {"lhs", a.at("lhs")},
                     {"rhs", a.at("rhs")},
                     {"residual", a.at("residual")},
                     {"extra_residual", a.at("extra_residual")},
                     {"extra_bound", a.at("extra_bound")},
                     {"omega_point", a.at("omega_point")},
                     {"passed", a.at("passed")}};
    }
    if (man.contains("crossbreeding") && !man.at("crossbreeding").empty()) {
        const auto& c = man.at("crossbreeding").front();
        const double left = c.at("asymptotic_left");
        const double right = c.at("asymptotic_right");
        const double shifted = c.at("shifted_left");
        h["quartic_sextic"] = {
            {"statement", "2{A5 + A6} + 1 ~ 3{A3 + A4}, A_l = |zeta(w_l)| prod Z^2(alpha^l)/Z^2(beta)"},
            {"U", c.at("U")},
            {"depths", depths},
            {"left", left},
            {"right", right},
            {"residual", std::abs(left - right)},
            {"tolerance", c.at("asymptotic_tolerance")},
            {"passed", std::abs(left - right) <= c.at("asymptotic_tolerance").get<double>()},
            {"read_with_w6_w7", {{"left", shifted}, {"right", right}, {"residual", std::abs(shifted - right)}}}};
    }
    return h;
}

std::string headline_markdown(const nlohmann::json& man)
{
    const auto h = man.contains("headline") ? man.at("headline") : headline_json(man);
    auto num = [](const nlohmann::json& v) { return format_double(v.get<double>()); };
    std::ostringstream o;
    o << "# Meta-functional equations: headline\n\n";
    if (h.contains("cos6")) {
        const auto& c = h.at("cos6");
        o << "## cos^6 meta-equation, asymptotic form\n\n"
          << "`" << c.at("statement").get<std::string>() << "`\n\n"
          << "U = " << num(c.at("U")) << ", L = " << c.at("L") << ", k = " << c.at("k") << "\n\n"
          << "| quantity | value |\n|---|---|\n"
          << "| left side | " << num(c.at("lhs")) << " |\n"
          << "| right side | " << num(c.at("rhs")) << " |\n"
          << "| residual | " << num(c.at("residual")) << " |\n"
          << "| omega correction | " << num(c.at("extra_residual")) << " |\n"
          << "| omega bound 2k/ln(pi L) x lhs | " << num(c.at("extra_bound")) << " |\n"
          << "| verified | " << (c.at("passed").get<bool>() ? "yes" : "no") << " |\n\n";
    }
    if (h.contains("quartic_sextic")) {
        const auto& q = h.at("quartic_sextic");
        const auto& s = q.at("read_with_w6_w7");
        o << "## Crossbred quartic/sextic meta-equation, asymptotic form\n\n"
          << "`" << q.at("statement").get<std::string>() << "`\n\n"
          << "| quantity | value |\n|---|---|\n"
          << "| 2{A5 + A6} + 1 | " << num(q.at("left")) << " |\n"
          << "| 3{A3 + A4} | " << num(q.at("right")) << " |\n"
          << "| residual | " << num(q.at("residual")) << " |\n"
          << "| propagated tolerance | " << num(q.at("tolerance")) << " |\n"
          << "| verified | " << (q.at("passed").get<bool>() ? "yes" : "no") << " |\n\n"
          << "Read with w6, w7 in place of w5, w6 the left side is " << num(s.at("left"))
          << ", residual " << num(s.at("residual")) << ": that reading does not hold.\n\n";
    }
    o << "## Caveats\n\n";
    for (const auto& c : h.at("caveats")) {
        o << "- " << c.get<std::string>() << '\n';
    }
    return o.str();
}

void write_outputs(const RunManifest& manifest)
{
    const std::filesystem::path dir = manifest.config.output_dir;
    std::filesystem::create_directories(dir);
    const auto j = manifest.to_json();
    std::ofstream(dir / "manifest.json") << j.dump(2) << '\n';
    std::ofstream(dir / "headline.json") << j.at("headline").dump(2) << '\n';

    std::ofstream md(dir / "report.md");
    md << headline_markdown(j) << '\n';
    md << "## Checks\n\n| check | result |\n|---|---|\n";
    for (const auto& [name, ok] : manifest.checks) {
        md << "| " << name << " | " << (ok ? "pass" : "FAIL") << " |\n";
    }
    if (!manifest.failure.empty()) {
        md << "\nStage failure: " << manifest.failure << '\n';
    }
    md << "\n## Meta-equations\n\n"
       << "| eq | k | U | exact residual | bound | omega correction | omega bound | result |\n"
       << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& m : manifest.meta) {
        md << "| " << m.instance.eq_id << " | " << m.instance.k << " | " << format_double(m.instance.U) << " | "
           << format_double(m.exact.residual) << " | " << format_double(m.exact.bound) << " | "
           << format_double(m.asymptotic.extra_residual) << " | " << format_double(m.asymptotic.extra_bound) << " | "
           << (m.exact.passed && m.asymptotic.passed ? "pass" : "FAIL") << " |\n";
    }
    if (!manifest.crossbreeding.empty()) {
        md << "\n## Crossbreeding\n\n";
        for (const auto& c : manifest.crossbreeding) {
            md << "U = " << format_double(c.U) << "\n\n"
               << "- `" << to_string(c.elimination) << "`: value " << format_double(c.elimination_value)
               << ", tolerance " << format_double(c.elimination_tolerance) << "\n"
               << "- `" << to_string(c.substituted) << "`: value " << format_double(c.substituted_value)
               << ", tolerance " << format_double(c.substituted_tolerance) << "\n";
            for (const auto& [k, v] : c.identity_values) {
                md << "- `N1[" << k << "] + N2[" << k << "] = D[" << k << "]`: relative residual " << format_double(v)
                   << "\n";
            }
            md << '\n';
        }
    }
    if (manifest.trend) {
        const auto& t = *manifest.trend;
        md << "## Omega trend\n\n"
           << "| | L = " << t.L << " | L = " << t.far_L << " |\n|---|---|---|\n"
           << "| median interval omega bound | " << format_double(t.near_median) << " | "
           << format_double(t.far_median) << " |\n"
           << "| 2k/ln(pi L) | " << format_double(t.near_scale) << " | " << format_double(t.far_scale) << " |\n\n";
    }
}

}  // namespace metazeta
