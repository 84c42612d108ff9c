#include "metazeta/json_io.hpp"

#include <charconv>
#include <array>

namespace metazeta {

void to_json(nlohmann::json& j, const EvalConfig& cfg)
{
    j = nlohmann::json{{"working_precision", cfg.working_precision},
                       {"t_min", cfg.t_min},
                       {"quadrature_rel_tol", cfg.quadrature_rel_tol},
                       {"rootfind_abs_tol", cfg.rootfind_abs_tol},
                       {"rs_min_height", cfg.rs_min_height}};
}

void from_json(const nlohmann::json& j, EvalConfig& cfg)
{
    EvalConfig out;
    out.working_precision = j.value("working_precision", out.working_precision);
    out.t_min = j.value("t_min", out.t_min);
    out.quadrature_rel_tol = j.value("quadrature_rel_tol", out.quadrature_rel_tol);
    out.rootfind_abs_tol = j.value("rootfind_abs_tol", out.rootfind_abs_tol);
    out.rs_min_height = j.value("rs_min_height", out.rs_min_height);
    out.validate();
    cfg = out;
}

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

}  // namespace metazeta
