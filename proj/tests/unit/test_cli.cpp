#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "varmech/cli.hpp"

using namespace varmech;
using namespace varmech::test;
using nlohmann::json;

namespace {

std::string read(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string data(const std::string& name) { return read(std::string(VARMECH_TEST_DATA) + "/" + name); }

cli::RunResult run(const std::string& file, cli::Command c, cli::Format f = cli::Format::text)
{
    return cli::run_document(data(file), c, ZeroTestSettings{}, f);
}

int shell(const std::string& args)
{
    const std::string cmd = std::string(VARMECH_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Every expression string in a JSON report, for round-trip checks.
void collect(const json& j, const std::string& key, std::vector<std::string>& out)
{
    static const std::vector<std::string> expression_keys{"residual", "L", "G0", "H", "H0", "lambda",
                                                          "modified_equation", "equations", "input_lagrangian"};
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            collect(v, k, out);
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            collect(v, key, out);
        }
    } else if (j.is_string() &&
               std::find(expression_keys.begin(), expression_keys.end(), key) != expression_keys.end()) {
        out.push_back(j.get<std::string>());
    }
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("text report for a passing system")
    {
        const auto r = run("shm.json", cli::Command::check);
        CHECK(r.exit_code == cli::exit_ok);
        CHECK(r.report.find("H3 (1,1): PASS (residual 0)") != std::string::npos);
        CHECK(r.report.find("H1: vacuous (n = 1)") != std::string::npos);
        CHECK(r.report.find("H2: vacuous (n = 1)") != std::string::npos);
    }

    TEST_CASE("json report for a failing system")
    {
        const auto r = run("dho.json", cli::Command::check, cli::Format::json);
        CHECK(r.exit_code == cli::exit_analysis);
        const json j = json::parse(r.report);
        CHECK(j["schema"] == 1);
        CHECK(j["result"] == "fail");
        const json& h3 = j["helmholtz"]["checks"][0];
        CHECK(h3["condition"] == "H3");
        CHECK(h3["i"] == 1);
        CHECK(h3["j"] == 1);
        CHECK(h3["residual"] == "2*b");
        CHECK(h3["verdict"] == "nonzero");
        CHECK(h3["max_abs_numeric"].get<double>() > 0.0);
    }

    TEST_CASE("multiplier report")
    {
        const auto r = run("dho.json", cli::Command::multiplier, cli::Format::json);
        CHECK(r.exit_code == cli::exit_ok);
        const json j = json::parse(r.report);
        CHECK(j["multiplier"]["lambda"] == "exp(b*t)");
        CHECK(proven_zero(ex(j["lagrangian"]["L"].get<std::string>(), {"x1"}) -
                          ex("exp(b*t)*(x1'^2/2 - w^2*x1^2/2)", {"x1"})));
        CHECK(j["lagrangian"]["validation"]["mode"] == "via_multiplier");
    }

    TEST_CASE("construct on a failing system reports and exits 2")
    {
        const auto r = run("dho.json", cli::Command::construct);
        CHECK(r.exit_code == cli::exit_analysis);
        CHECK(r.report.find("H3 (1,1): FAIL (residual 2*b)") != std::string::npos);
    }

    TEST_CASE("analysis errors still produce a report")
    {
        const auto r = cli::run_document(R"({"n": 2, "coordinates": ["x1", "x2"], "equations": ["x1''", "x2''"]})",
                                         cli::Command::multiplier, ZeroTestSettings{}, cli::Format::json);
        CHECK(r.exit_code == cli::exit_analysis);
        CHECK(json::parse(r.report)["error"]["kind"] == "not_one_dimensional");
    }

    TEST_CASE("roundtrip closes the loop from a Lagrangian")
    {
        const auto r = run("shm_lagrangian.json", cli::Command::roundtrip, cli::Format::json);
        CHECK(r.exit_code == cli::exit_ok);
        const json j = json::parse(r.report);
        CHECK(j["system"]["equations"][0] == "x1'' + w^2*x1");
        CHECK(j["lagrangian"]["L"] == "x1'^2/2 - w^2*x1^2/2");
        CHECK(run("shm.json", cli::Command::roundtrip).exit_code == cli::exit_input);
        CHECK(run("shm_lagrangian.json", cli::Command::check).exit_code == cli::exit_input);
    }

    TEST_CASE("input errors exit 1 without a report")
    {
        const auto r = run("bad_syntax.json", cli::Command::check);
        CHECK(r.exit_code == cli::exit_input);
        CHECK(r.report.empty());
        CHECK(r.diagnostic.find("position") != std::string::npos);
        CHECK(cli::run_document("[]", cli::Command::check, {}, cli::Format::text).exit_code == cli::exit_input);
        cli::RunConfig missing;
        missing.input = "/nonexistent/system.json";
        CHECK(cli::run(missing).exit_code == cli::exit_input);
    }

    TEST_CASE("every emitted expression re-parses to itself")
    {
        const std::pair<const char*, cli::Command> runs[] = {
            {"shm.json", cli::Command::construct},        {"dho.json", cli::Command::multiplier},
            {"gyroscopic.json", cli::Command::construct}, {"pendulum.json", cli::Command::construct},
            {"magnetic.json", cli::Command::construct},   {"shm_lagrangian.json", cli::Command::roundtrip},
        };
        for (const auto& [file, command] : runs) {
            const json j = json::parse(run(file, command, cli::Format::json).report);
            const SystemFile ctx = read_system_file(data(file));
            std::vector<std::string> exprs;
            collect(j, "", exprs);
            CHECK(exprs.size() > 2);
            for (const auto& s : exprs) {
                const Expr e = parse_expression(s, ctx, ParseOptions{true});
                CHECK(to_string(e) == s);
            }
        }
    }

    TEST_CASE("reports are deterministic and match the golden files")
    {
        const std::tuple<const char*, cli::Command, cli::Format, const char*> golden[] = {
            {"shm.json", cli::Command::check, cli::Format::text, "shm_check.txt"},
            {"dho.json", cli::Command::check, cli::Format::json, "dho_check.json"},
            {"dho.json", cli::Command::multiplier, cli::Format::text, "dho_multiplier.txt"},
            {"gyroscopic.json", cli::Command::construct, cli::Format::json, "gyroscopic_construct.json"},
        };
        for (const auto& [file, command, format, expected] : golden) {
            const auto a = run(file, command, format);
            const auto b = run(file, command, format);
            CHECK(a.report == b.report);
            CHECK_MESSAGE(a.report == read(std::string(VARMECH_GOLDEN_DIR) + "/" + expected), expected);
        }
    }

    TEST_CASE("settings change only what they should")
    {
        const auto a = cli::run_document(data("dho.json"), cli::Command::check, ZeroTestSettings{100, 1, 1e-9},
                                         cli::Format::json);
        const auto b = cli::run_document(data("dho.json"), cli::Command::check, ZeroTestSettings{100, 2, 1e-9},
                                         cli::Format::json);
        CHECK(json::parse(a.report)["settings"]["seed"] == 1);
        CHECK(json::parse(a.report)["helmholtz"]["checks"][0]["residual"] ==
              json::parse(b.report)["helmholtz"]["checks"][0]["residual"]);
    }

    TEST_CASE("command-line exit codes")
    {
        const std::string dir = VARMECH_TEST_DATA;
        CHECK(shell("check " + dir + "/shm.json") == 0);
        CHECK(shell("check " + dir + "/dho.json") == 2);
        CHECK(shell("multiplier " + dir + "/dho.json --format json") == 0);
        CHECK(shell("check " + dir + "/bad_syntax.json") == 1);
        CHECK(shell("check " + dir + "/missing.json") == 1);
        CHECK(shell("check " + dir + "/shm.json --tol 0") == 1);
        CHECK(shell("check " + dir + "/shm.json --samples 0") == 1);
        CHECK(shell("check " + dir + "/shm.json --format yaml") == 1);
        CHECK(shell("simulate " + dir + "/shm.json") == 1);
        CHECK(shell("") == 1);
        CHECK(shell("--help") == 0);
    }
}
