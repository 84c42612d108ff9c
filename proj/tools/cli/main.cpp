#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "metazeta/crossbreed.hpp"
#include "metazeta/errors.hpp"
#include "metazeta/json_io.hpp"
#include "metazeta/numerics.hpp"
#include "metazeta/pipeline.hpp"
#include "metazeta/trig.hpp"
#include "metazeta/zeta.hpp"

using namespace metazeta;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path)
{
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void print(const json& j)
{
    std::cout << j.dump(2) << '\n';
}

// Table source shared by factorize and meta: a cached CSV or a fresh build.
struct TableOptions {
    std::string path;
    double t_lo = 4000.0;
    double t_hi = 8400.0;
    double resolution = kMaxLadderResolution;

    void add_to(CLI::App* app)
    {
        app->add_option("--table", path, "Ladder table CSV written by 'ladder build'");
        app->add_option("--t-lo", t_lo, "Lower end when building a table")->capture_default_str();
        app->add_option("--t-hi", t_hi, "Upper end when building a table")->capture_default_str();
        app->add_option("--resolution", resolution, "Grid step when building a table")->capture_default_str();
    }

    LadderTable load(const EvalConfig& cfg) const
    {
        if (!path.empty()) {
            return load_ladder(path);
        }
        return build_ladder(t_lo, t_hi, resolution, cfg);
    }
};

struct StripOptions {
    double sigma1 = DefaultStrips::sigma1;
    double sigma2 = DefaultStrips::sigma2;
    double delta = DefaultStrips::delta;

    void add_to(CLI::App* app)
    {
        app->add_option("--sigma1", sigma1, "Left edge of the strip band");
        app->add_option("--sigma2", sigma2, "Right edge of the strip band");
        app->add_option("--delta", delta, "Strip half-width");
    }
};

json strips_json(const StripSet& strips)
{
    json out = json::array();
    for (const auto& s : strips) {
        out.push_back({{"l", s.l}, {"sigma0", s.sigma0}, {"delta", s.delta}, {"sigma_lo", s.sigma_lo()},
                       {"sigma_hi", s.sigma_hi()}});
    }
    return out;
}

std::vector<std::string> read_u_set(const std::string& path)
{
    std::vector<std::string> values;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream parts(line);
        std::string item;
        while (std::getline(parts, item, ',')) {
            const auto b = item.find_first_not_of(" \t\r");
            if (b == std::string::npos) {
                continue;
            }
            values.push_back(item.substr(b, item.find_last_not_of(" \t\r") - b + 1));
        }
    }
    return values;
}

// Bindings file: one meta-equation instance, or an array of them.
std::vector<MetaEquationInstance> read_instances(const std::string& path)
{
    const auto j = read_json(path);
    std::vector<MetaEquationInstance> out;
    try {
        if (j.is_array()) {
            for (const auto& item : j) {
                out.push_back(item.get<MetaEquationInstance>());
            }
        } else {
            out.push_back(j.get<MetaEquationInstance>());
        }
    } catch (const json::exception& e) {
        throw ConfigError(path + ": not a meta-equation instance: " + e.what());
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zeta factorization, grafting, meta-functional equations and crossbreeding at desk scale"};
    app.require_subcommand(1);
    EvalConfig eval;
    int code = kPass;

    // zeta
    auto* zeta_cmd = app.add_subcommand("zeta", "Evaluate zeta(s) and Z(t)");
    zeta_cmd->require_subcommand(1);
    double sigma = 0.5;
    double t = 0.0;
    auto* zeta_eval = zeta_cmd->add_subcommand("eval", "zeta(sigma + it)");
    zeta_eval->add_option("--sigma", sigma)->required();
    zeta_eval->add_option("--t", t)->required();
    zeta_eval->callback([&] {
        const auto v = zeta({sigma, t}, eval);
        print({{"s", {sigma, t}}, {"value_re", v.real()}, {"value_im", v.imag()}});
    });
    auto* zeta_z = zeta_cmd->add_subcommand("z", "Hardy Z(t) and Z(t)^2 / ln t");
    zeta_z->add_option("--t", t)->required();
    zeta_z->callback([&] {
        const auto s = critical_sample(t, eval);
        print({{"t", s.t}, {"z", s.z}, {"z_tilde_sq", s.z_tilde_sq}});
    });

    // trig
    auto* trig_cmd = app.add_subcommand("trig", "Closed-form interval means of the nine integrands");
    trig_cmd->require_subcommand(1);
    int grid = 50;
    double trig_L = 1.0;
    auto* trig_verify = trig_cmd->add_subcommand("verify", "CSV of closed form against quadrature");
    trig_verify->add_option("--grid", grid, "Number of U values in (0, pi/12)")->capture_default_str()->check(
        CLI::PositiveNumber);
    trig_verify->add_option("--L", trig_L, "Interval start is pi L")->capture_default_str();
    trig_verify->callback([&] {
        std::cout << "l,U,closed_form,quadrature,abs_err\n";
        const double a = std::numbers::pi * trig_L;
        for (int l = 1; l <= kIntegrandCount; ++l) {
            for (int i = 1; i <= grid; ++i) {
                const double U = kUMax * i / (grid + 1.0);
                const double closed = mean_value_closed_form(l, U);
                const auto q =
                    numerics::integrate([&](double x) { return eval_f(l, x); }, a, a + U, {.rel_tol = 1e-14});
                const double quad = q.value / U;
                const double err = std::abs(closed - quad);
                if (err > 1e-10 * std::max(std::abs(quad), 1.0)) {
                    code = kVerificationFailed;
                }
                std::cout << l << ',' << format_double(U) << ',' << format_double(closed) << ','
                          << format_double(quad) << ',' << format_double(err) << '\n';
            }
        }
    });

    // ladder
    auto* ladder_cmd = app.add_subcommand("ladder", "Surrogate Jacob's ladder tables");
    ladder_cmd->require_subcommand(1);
    double t_lo = 4000.0;
    double t_hi = 8400.0;
    double resolution = kMaxLadderResolution;
    std::optional<double> anchor;
    std::string out_path;
    auto* ladder_build = ladder_cmd->add_subcommand("build", "Tabulate phi and write a CSV with a JSON sidecar");
    ladder_build->add_option("--t-lo", t_lo)->required();
    ladder_build->add_option("--t-hi", t_hi)->required();
    ladder_build->add_option("--resolution", resolution)->capture_default_str();
    ladder_build->add_option("--anchor", anchor, "phi(t_lo); default keeps phi(t) < t");
    ladder_build->add_option("--out", out_path)->required();
    ladder_build->callback([&] {
        const auto table = build_ladder(t_lo, t_hi, resolution, eval, {anchor, 0});
        save_ladder(table, out_path);
        print({{"path", out_path},
               {"rows", table.grid().size()},
               {"t_lo", table.t_lo()},
               {"t_hi", table.t_hi()},
               {"phi_lo", table.phi_lo()},
               {"phi_hi", table.phi_hi()},
               {"anchor_phi", table.anchor_phi()},
               {"checksum", ladder_checksum(table)}});
    });

    // factorize
    auto* fact_cmd = app.add_subcommand("factorize", "Certificate for the iterated factorization of one integrand");
    int l = 1;
    int k = 1;
    double U = 0.1;
    long L = 1592;
    TableOptions table_opts;
    fact_cmd->add_option("--l", l, "Integrand 1..9")->required();
    fact_cmd->add_option("--k", k, "Iteration depth")->required();
    fact_cmd->add_option("--U", U, "Interval width in (0, pi/12)")->required();
    fact_cmd->add_option("--L", L, "Interval start is pi L")->required();
    table_opts.add_to(fact_cmd);
    fact_cmd->callback([&] {
        const auto table = table_opts.load(eval);
        FactorizationOptions opt;
        opt.k_max = std::max(k, kDefaultKMax);
        const auto cert = factorize(l, k, U, L, table, opt);
        const auto rep = verify_certificate(cert, table);
        print(cert);
        if (!rep.passed()) {
            std::cerr << json(rep).dump(2) << '\n';
            code = kVerificationFailed;
        }
    });

    // graft
    auto* graft_cmd = app.add_subcommand("graft", "Find w in strip l with |zeta(w)| equal to a target");
    int strip_l = 1;
    double target = 0.0;
    std::vector<double> window{10.0, 2000.0};
    StripOptions strip_opts;
    GraftSearchOptions graft_opts;
    graft_cmd->add_option("--strip", strip_l, "Strip index 1..12")->required()->check(CLI::Range(1, kStripCount));
    graft_cmd->add_option("--target", target)->required();
    graft_cmd->add_option("--t-window", window, "Search window a b")->expected(2)->capture_default_str();
    graft_cmd->add_option("--t-cap", graft_opts.t_cap)->capture_default_str();
    graft_cmd->add_flag("!--no-escalate", graft_opts.escalate, "Search only the given window");
    strip_opts.add_to(graft_cmd);
    graft_cmd->callback([&] {
        graft_opts.t_a = window[0];
        graft_opts.t_b = window[1];
        const auto strips = build_strips(strip_opts.sigma1, strip_opts.sigma2, strip_opts.delta);
        const auto g = find_graft(strips[static_cast<std::size_t>(strip_l - 1)], target, graft_opts, eval);
        print(g);
        if (std::abs(g.achieved - g.target) > graft_opts.graft_tol) {
            code = kVerificationFailed;
        }
    });

    // strips
    auto* strips_cmd = app.add_subcommand("strips", "Disjoint grafting strips");
    strips_cmd->require_subcommand(1);
    StripOptions build_opts;
    auto* strips_build = strips_cmd->add_subcommand("build", "Twelve strips between sigma1 and sigma2");
    build_opts.add_to(strips_build);
    strips_build->callback([&] {
        const auto strips = build_strips(build_opts.sigma1, build_opts.sigma2, build_opts.delta);
        print({{"sigma1", build_opts.sigma1},
               {"sigma2", build_opts.sigma2},
               {"delta", build_opts.delta},
               {"disjoint", strips_disjoint(strips, build_opts.sigma1, build_opts.sigma2)},
               {"strips", strips_json(strips)}});
    });

    // usets
    auto* usets_cmd = app.add_subcommand("usets", "Admissible sets of interval widths");
    usets_cmd->require_subcommand(1);
    std::string uset_file;
    auto* usets_validate = usets_cmd->add_subcommand("validate", "Check a file of widths (comma or newline separated)");
    usets_validate->add_option("file", uset_file)->required()->check(CLI::ExistingFile);
    usets_validate->callback([&] {
        const auto result = validate_u_set(read_u_set(uset_file));
        if (const auto* ok = std::get_if<AdmissibleUSet>(&result)) {
            json values = json::array();
            for (std::size_t n = 1; n <= ok->size(); ++n) {
                values.push_back({{"text", ok->values[n - 1].text}, {"value", ok->at(n)}});
            }
            print({{"admissible", true}, {"values", values}});
        } else {
            json violations = json::array();
            for (const auto& v : std::get<std::vector<USetViolation>>(result)) {
                violations.push_back({{"constraint", v.constraint}, {"detail", v.detail}});
            }
            print({{"admissible", false}, {"violations", violations}});
            code = kVerificationFailed;
        }
    });

    // meta
    auto* meta_cmd = app.add_subcommand("meta", "Meta-functional equations");
    meta_cmd->require_subcommand(1);
    int eq_id = 1;
    std::string form_text = "exact";
    std::string bindings_path;
    MetaTolerances meta_tol;
    TableOptions meta_table;
    StripOptions meta_strips;
    auto* meta_assemble = meta_cmd->add_subcommand("assemble", "Certificate plus grafts for one equation, as JSON");
    meta_assemble->add_option("--eq", eq_id, "Equation 1..9")->required()->check(CLI::Range(1, kIntegrandCount));
    meta_assemble->add_option("--k", k)->required();
    meta_assemble->add_option("--U", U)->required();
    meta_assemble->add_option("--L", L)->required();
    meta_table.add_to(meta_assemble);
    meta_strips.add_to(meta_assemble);
    meta_assemble->callback([&] {
        const auto table = meta_table.load(eval);
        FactorizationOptions opt;
        opt.k_max = std::max(k, kDefaultKMax);
        const auto cert = factorize(eq_id, k, U, L, table, opt);
        const auto strips = build_strips(meta_strips.sigma1, meta_strips.sigma2, meta_strips.delta);
        print(assemble_meta(eq_id, cert, build_support_grafts(cert, strips, 1, {}, eval), eval));
    });
    auto* meta_verify = meta_cmd->add_subcommand("verify", "Check an assembled equation in exact or asymptotic form");
    meta_verify->add_option("--eq", eq_id, "Equation 1..9")->required()->check(CLI::Range(1, kIntegrandCount));
    meta_verify->add_option("--form", form_text)->check(CLI::IsMember({"exact", "asymptotic"}))->capture_default_str();
    meta_verify->add_option("--bindings", bindings_path, "JSON from 'meta assemble'")->required()->check(
        CLI::ExistingFile);
    meta_verify->add_option("--graft-tol", meta_tol.graft_tol)->capture_default_str();
    meta_verify->add_option("--asymptotic-factor", meta_tol.asymptotic_factor)->capture_default_str();
    meta_table.add_to(meta_verify);
    meta_verify->callback([&] {
        const auto instances = read_instances(bindings_path);
        const auto table = meta_table.load(eval);
        const auto form = parse_meta_form(form_text);
        json out = json::array();
        bool found = false;
        for (const auto& inst : instances) {
            if (inst.eq_id != eq_id) {
                continue;
            }
            found = true;
            const auto rep = verify_meta(inst, form, table, meta_tol);
            out.push_back(rep);
            if (!rep.passed) {
                code = kVerificationFailed;
            }
        }
        if (!found) {
            throw ConfigError(bindings_path + " holds no instance of equation " + std::to_string(eq_id));
        }
        print(out.size() == 1 ? out.front() : out);
    });

    // crossbreed
    auto* cross_cmd = app.add_subcommand("crossbreed", "Symbolic eliminations between meta-equations");
    cross_cmd->require_subcommand(1);
    std::string script_path;
    auto* cross_derive = cross_cmd->add_subcommand("derive", "Run a derivation script");
    cross_derive->add_option("--script", script_path)->required()->check(CLI::ExistingFile);
    cross_derive->add_option("--bindings", bindings_path, "Instances providing values for 'eval'")->check(
        CLI::ExistingFile);
    cross_derive->callback([&] {
        Binding binding;
        if (!bindings_path.empty()) {
            for (const auto& inst : read_instances(bindings_path)) {
                merge_binding(binding, binding_of(inst, eval));
            }
        }
        Script script(bindings_path.empty() ? nullptr : &binding);
        std::istringstream in(read_file(script_path));
        script.run(in, std::cout);
    });

    // report
    auto* report_cmd = app.add_subcommand("report", "Reports from a run manifest");
    report_cmd->require_subcommand(1);
    std::string manifest_path;
    std::string format = "markdown";
    auto* report_headline = report_cmd->add_subcommand("headline", "The cos^6 and quartic/sextic equations");
    report_headline->add_option("--manifest", manifest_path)->required()->check(CLI::ExistingFile);
    report_headline->add_option("--format", format)->check(CLI::IsMember({"markdown", "json"}))->capture_default_str();
    report_headline->callback([&] {
        const auto man = read_json(manifest_path);
        if (format == "json") {
            print(headline_json(man));
        } else {
            std::cout << headline_markdown(man);
        }
        if (!man.value("passed", false)) {
            code = kVerificationFailed;
        }
    });

    // run
    auto* run_cmd = app.add_subcommand("run", "Full pipeline from a configuration file");
    std::string config_path;
    std::string out_dir;
    bool print_config = false;
    run_cmd->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "Overrides output.directory");
    run_cmd->add_flag("--print-config", print_config, "Print the effective configuration and exit");
    run_cmd->callback([&] {
        auto cfg = load_config(config_path);
        if (!out_dir.empty()) {
            cfg.output_dir = out_dir;
        }
        cfg.validate();
        if (print_config) {
            std::cout << render_config(cfg);
            return;
        }
        const auto manifest = run_pipeline(cfg, &std::cerr);
        write_outputs(manifest);
        for (const auto& [name, ok] : manifest.checks) {
            std::cout << (ok ? "pass " : "FAIL ") << name << '\n';
        }
        if (!manifest.failure.empty()) {
            std::cout << "FAIL stage: " << manifest.failure << '\n';
        }
        std::cout << "outputs in " << cfg.output_dir << '\n';
        if (!manifest.passed()) {
            code = kVerificationFailed;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsageError;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        std::cerr << "failed: " << e.what() << '\n';
        return kVerificationFailed;
    }
    return code;
}
