#include "varmech/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "varmech/calculus.hpp"
#include "varmech/parser.hpp"

namespace varmech::cli {

namespace {

using Json = nlohmann::ordered_json;
using varmech::to_string;

std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? sep : "") + parts[i];
    }
    return out;
}

std::string verdict_word(const ZeroVerdict& v)
{
    return to_string(v.kind);
}

Json witness_json(const ZeroVerdict& v)
{
    Json w = Json::object();
    if (v.witness) {
        for (const auto& [var, value] : *v.witness) {
            w[to_string(var)] = value;
        }
    }
    return w;
}

std::string witness_text(const ZeroVerdict& v)
{
    if (!v.witness) {
        return {};
    }
    std::vector<std::string> parts;
    for (const auto& [var, value] : *v.witness) {
        parts.push_back(to_string(var) + " = " + number(value));
    }
    return join(parts, ", ");
}

Json verdict_fields(Json j, const Expr& residual, const ZeroVerdict& v)
{
    j["residual"] = to_string(residual);
    j["verdict"] = verdict_word(v);
    j["max_abs_numeric"] = v.max_abs;
    if (v.witness) {
        j["witness"] = witness_json(v);
    }
    return j;
}

std::string verdict_text(const Expr& residual, const ZeroVerdict& v)
{
    switch (v.kind) {
    case ZeroKind::proven_zero:
        return "PASS (residual " + to_string(residual) + ")";
    case ZeroKind::numerically_zero:
        return "PASS numerically (residual " + to_string(residual) + ", max |value| " + number(v.max_abs) + ")";
    case ZeroKind::nonzero:
        break;
    }
    return "FAIL (residual " + to_string(residual) + ")\n    witness: " + witness_text(v);
}

std::string rationals(const std::vector<Rational>& r)
{
    std::vector<std::string> parts;
    for (const auto& x : r) {
        parts.push_back(to_string(x));
    }
    return "(" + join(parts, ", ") + ")";
}

Json rationals_json(const std::vector<Rational>& r)
{
    Json j = Json::array();
    for (const auto& x : r) {
        j.push_back(to_string(x));
    }
    return j;
}

// Accumulates one report in both renderings; only one is emitted.
struct Report {
    Json json = Json::object();
    std::ostringstream text;
};

void header(Report& r, Command command, const OdeSystem& sys, const ZeroTestSettings& s)
{
    r.json["schema"] = 1;
    r.json["command"] = to_string(command);
    r.json["settings"] = {{"seed", s.seed}, {"samples", s.samples}, {"tol", s.tol}};
    r.json["system"] = {{"n", sys.n()}, {"coordinates", sys.coordinates}, {"parameters", sys.parameters}};
    std::vector<std::string> eqs;
    for (const auto& e : sys.equations) {
        eqs.push_back(to_string(e));
    }
    r.json["system"]["equations"] = eqs;

    r.text << "varmech " << to_string(command) << "\n";
    r.text << "settings: seed " << s.seed << ", samples " << s.samples << ", tol " << number(s.tol) << "\n";
    r.text << "system: n = " << sys.n() << ", coordinates " << join(sys.coordinates, " ");
    if (!sys.parameters.empty()) {
        r.text << ", parameters " << join(sys.parameters, " ");
    }
    r.text << "\n";
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        r.text << "  F" << i + 1 << " = " << eqs[i] << "\n";
    }
}

void helmholtz_section(Report& r, const HelmholtzReport& rep)
{
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        checks.push_back(verdict_fields({{"condition", to_string(c.condition)}, {"i", c.i}, {"j", c.j}}, c.residual,
                                        c.verdict));
    }
    Json vacuous = Json::array();
    if (rep.h1_vacuous) {
        vacuous.push_back("H1");
    }
    if (rep.h2_vacuous) {
        vacuous.push_back("H2");
    }
    r.json["helmholtz"] = {{"outcome", to_string(rep.outcome)}, {"vacuous", vacuous}, {"checks", checks}};

    r.text << "\nHelmholtz conditions\n";
    for (const Condition cond : {Condition::H1, Condition::H2, Condition::H3}) {
        const bool vac = (cond == Condition::H1 && rep.h1_vacuous) || (cond == Condition::H2 && rep.h2_vacuous);
        if (vac) {
            r.text << to_string(cond) << ": vacuous (n = " << rep.n << ")\n";
            continue;
        }
        for (const auto& c : rep.of(cond)) {
            r.text << to_string(cond) << " (" << c.i << "," << c.j << "): " << verdict_text(c.residual, c.verdict)
                   << "\n";
        }
    }
    r.text << "outcome: " << to_string(rep.outcome) << "\n";
}

void lagrangian_section(Report& r, const LagrangianResult& res, const std::vector<std::string>& coords)
{
    std::vector<std::string> H;
    for (const auto& h : res.H) {
        H.push_back(to_string(h));
    }
    Json residuals = Json::array();
    for (std::size_t i = 0; i < res.validation.residuals.size(); ++i) {
        residuals.push_back(verdict_fields({{"equation", i + 1}}, res.validation.residuals[i],
                                           res.validation.verdicts[i]));
    }
    r.json["lagrangian"] = {
        {"L", to_string(res.L)},
        {"G0", to_string(res.G0)},
        {"H", H},
        {"H0", to_string(res.H0)},
        {"gauge_note", gauge_note},
        {"velocity_reference", rationals_json(res.velocity_reference)},
        {"coordinate_reference", rationals_json(res.coordinate_reference)},
        {"validation", {{"mode", to_string(res.validation.mode)}, {"residuals", residuals}}},
    };

    r.text << "\nLagrangian\n";
    r.text << "L = " << to_string(res.L) << "\n";
    r.text << "  G0 = " << to_string(res.G0) << "\n";
    for (std::size_t i = 0; i < H.size(); ++i) {
        r.text << "  H" << i + 1 << " = " << H[i] << "\n";
    }
    r.text << "  H0 = " << to_string(res.H0) << "\n";
    r.text << "  references: velocities " << rationals(res.velocity_reference) << ", coordinates "
           << rationals(res.coordinate_reference) << "\n";
    r.text << "  note: " << gauge_note << "\n";
    r.text << "validation (" << to_string(res.validation.mode) << ")\n";
    for (std::size_t i = 0; i < res.validation.residuals.size(); ++i) {
        r.text << "  EL_" << coords[i] << " - F" << i + 1 << ": "
               << verdict_text(res.validation.residuals[i], res.validation.verdicts[i]) << "\n";
    }
}

void multiplier_section(Report& r, const MultiplierResult& m)
{
    r.json["multiplier"] = verdict_fields(
        {{"lambda", to_string(m.lambda)}, {"modified_equation", to_string(m.modified.equations[0])}},
        m.h3_residual, m.h3_verdict);

    r.text << "\nJacobi last multiplier\n";
    r.text << "Lambda = " << to_string(m.lambda) << "\n";
    r.text << "  Lambda*F1 = " << to_string(m.modified.equations[0]) << "\n";
    r.text << "H3 (1,1) of Lambda*F: " << verdict_text(m.h3_residual, m.h3_verdict) << "\n";
}

void error_section(Report& r, const std::string& kind, const std::string& message)
{
    r.json["error"] = {{"kind", kind}, {"message", message}};
    r.text << "\nerror (" << kind << "): " << message << "\n";
}

const char* error_kind(const AnalysisError& e)
{
    if (dynamic_cast<const ConditionsFailedError*>(&e)) return "conditions_failed";
    if (dynamic_cast<const EvaluationDomainError*>(&e)) return "evaluation_domain";
    if (dynamic_cast<const NonlinearAccelerationError*>(&e)) return "nonlinear_acceleration";
    if (dynamic_cast<const NotExactError*>(&e)) return "not_exact";
    if (dynamic_cast<const UnsupportedIntegrandError*>(&e)) return "unsupported_integrand";
    if (dynamic_cast<const VelocityDependentResidueError*>(&e)) return "velocity_dependent_residue";
    if (dynamic_cast<const ClosureFailureError*>(&e)) return "closure_failure";
    if (dynamic_cast<const PostconditionFailureError*>(&e)) return "postcondition_failure";
    if (dynamic_cast<const ValidationFailureError*>(&e)) return "validation_failure";
    if (dynamic_cast<const NotOneDimensionalError*>(&e)) return "not_one_dimensional";
    if (dynamic_cast<const VelocityStructureUnsupportedError*>(&e)) return "velocity_structure_unsupported";
    if (dynamic_cast<const IntegrationUnsupportedError*>(&e)) return "integration_unsupported";
    if (dynamic_cast<const AccelerationInLagrangianError*>(&e)) return "acceleration_in_lagrangian";
    if (dynamic_cast<const JerkInInputError*>(&e)) return "jerk_in_input";
    return "analysis";
}

std::string render(Report& r, Format format, bool passed)
{
    if (format == Format::json) {
        r.json["result"] = passed ? "pass" : "fail";
        return r.json.dump(2) + "\n";
    }
    r.text << "\nresult: " << (passed ? "PASS" : "FAIL") << "\n";
    return r.text.str();
}

// Runs the analysis for a parsed system and fills the report; returns pass/fail.
bool analyse(Report& r, Command command, const OdeSystem& sys, const ZeroTestSettings& settings)
{
    try {
        if (command == Command::multiplier) {
            const MultiplierResult m = multiplier_then_construct(sys, settings);
            multiplier_section(r, m);
            lagrangian_section(r, *m.construction, sys.coordinates);
            return true;
        }
        const HelmholtzReport rep = check(sys, settings);
        helmholtz_section(r, rep);
        if (!rep.passed()) {
            return false;
        }
        if (command == Command::check) {
            return true;
        }
        lagrangian_section(r, construct(sys, settings), sys.coordinates);
        return true;
    } catch (const AnalysisError& e) {
        error_section(r, error_kind(e), e.what());
        return false;
    }
}

}  // namespace

Command parse_command(const std::string& name)
{
    if (name == "check") return Command::check;
    if (name == "construct") return Command::construct;
    if (name == "multiplier") return Command::multiplier;
    if (name == "roundtrip") return Command::roundtrip;
    throw InputError("unknown command '" + name + "'");
}

const char* to_string(Command c) noexcept
{
    switch (c) {
    case Command::check: return "check";
    case Command::construct: return "construct";
    case Command::multiplier: return "multiplier";
    case Command::roundtrip: return "roundtrip";
    }
    return "?";
}

RunResult run_document(const std::string& document, Command command, const ZeroTestSettings& settings,
                       Format format)
{
    OdeSystem sys;
    std::optional<Expr> lagrangian;
    try {
        const SystemFile file = read_system_file(document);
        if (command == Command::roundtrip) {
            if (!file.lagrangian) {
                throw SchemaError("roundtrip needs a document with a 'lagrangian' field");
            }
            lagrangian = load_lagrangian(file);
            sys.coordinates = file.coordinates;
            sys.parameters = file.parameters;
        } else {
            if (file.lagrangian) {
                throw SchemaError(std::string(to_string(command)) + " needs a document with an 'equations' field");
            }
            sys = build_system(file);
        }
    } catch (const InputError& e) {
        return {exit_input, {}, e.what()};
    } catch (const AnalysisError& e) {
        // Well-formed text that violates a structural rule (jerk terms,
        // accelerations in a Lagrangian) is still an input problem.
        return {exit_input, {}, e.what()};
    }

    Report r;
    if (lagrangian) {
        sys.equations = euler_lagrange(*lagrangian, sys.coordinates);
    }
    header(r, command, sys, settings);
    if (lagrangian) {
        r.json["input_lagrangian"] = to_string(*lagrangian);
        r.text << "  (Euler-Lagrange equations of L = " << to_string(*lagrangian) << ")\n";
    }
    const bool passed = analyse(r, command, sys, settings);
    return {passed ? exit_ok : exit_analysis, render(r, format, passed), {}};
}

RunResult run(const RunConfig& config)
{
    std::ifstream in(config.input, std::ios::binary);
    if (!in) {
        return {exit_input, {}, "cannot read input file '" + config.input + "'"};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_document(buf.str(), config.command, config.settings, config.format);
}

}  // namespace varmech::cli
