// End-to-end tests of the fidelium binary: exit-code contract, JSON output
// shapes, determinism across runs and worker counts. The binary path comes
// from the FIDELIUM_CLI environment variable (set by ctest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

std::string cli_path() {
    const char* path = std::getenv("FIDELIUM_CLI");
    REQUIRE_MESSAGE(path != nullptr, "FIDELIUM_CLI must point at the fidelium binary");
    return path;
}

RunResult run_cli(const std::string& args) {
    std::string command = cli_path() + " " + args + " 2>/dev/null";
    std::FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.stdout_text.append(buffer.data(), got);
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() /
            ("fidelium_cli_" + std::to_string(::getpid()) + "_" + name))
        .string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("basis command dumps d^2 - 1 generators") {
    RunResult result = run_cli("basis --dim 3");
    CHECK(result.exit_code == 0);
    json doc = json::parse(result.stdout_text);
    CHECK(doc["dim"] == 3);
    CHECK(doc["generators"].size() == 8);
    CHECK(doc["k_d"].get<double>() == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("design gen + verify round trip through files") {
    std::string path = temp_path("design3.json");
    RunResult gen = run_cli("design gen --dim 3 --method exact -o " + path);
    REQUIRE(gen.exit_code == 0);
    json gen_doc = json::parse(gen.stdout_text);
    CHECK(gen_doc["max_residual"].get<double>() < 1e-12);

    RunResult verify = run_cli("design verify " + path);
    CHECK(verify.exit_code == 0);
    json verify_doc = json::parse(verify.stdout_text);
    CHECK(verify_doc["minimal"] == true);
    CHECK(verify_doc["max_residual"].get<double>() < 1e-12);
    CHECK(verify_doc["residuals"]["overlap"].get<double>() < 1e-12);
    std::remove(path.c_str());
}

TEST_CASE("design gen search is deterministic and certifies") {
    std::string a = temp_path("search_a.json");
    std::string b = temp_path("search_b.json");
    REQUIRE(run_cli("design gen --dim 4 --method search --seed 3 -o " + a).exit_code == 0);
    REQUIRE(run_cli("design gen --dim 4 --method search --seed 3 -o " + b).exit_code == 0);
    CHECK(read_file(a) == read_file(b));
    CHECK(!read_file(a).empty());
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("design gen exact rejects unsupported dimensions") {
    RunResult result = run_cli("design gen --dim 4 --method exact -o " + temp_path("nope.json"));
    CHECK(result.exit_code == 1);
    json doc = json::parse(result.stdout_text);
    CHECK(doc["code"] == "bad_argument");
}

TEST_CASE("channel-gen + fidelity: depolarizing closed form through files") {
    std::string path = temp_path("depol.json");
    RunResult gen = run_cli("channel-gen --kind depolarizing --dim 3 --p 0.3 -o " + path);
    REQUIRE(gen.exit_code == 0);

    RunResult fid = run_cli("fidelity --channel " + path + " --method generators");
    REQUIRE(fid.exit_code == 0);
    json doc = json::parse(fid.stdout_text);
    CHECK(doc["method"] == "generators");
    CHECK(doc["value"].get<double>() == doctest::Approx(0.8).epsilon(1e-12));

    RunResult ent = run_cli("fidelity --channel " + path + " --method entanglement");
    json ent_doc = json::parse(ent.stdout_text);
    CHECK(ent_doc["value"].get<double>() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(ent_doc["metadata"]["relation"] == "external identity");
    std::remove(path.c_str());
}

TEST_CASE("fidelity with design method and gate file") {
    std::string channel = temp_path("ch2.json");
    std::string design = temp_path("des2.json");
    REQUIRE(run_cli("channel-gen --kind kraus-random --dim 2 --k 3 --seed 11 -o " + channel)
                .exit_code == 0);
    REQUIRE(run_cli("design gen --dim 2 -o " + design).exit_code == 0);

    RunResult gen = run_cli("fidelity --channel " + channel + " --method generators");
    RunResult des = run_cli("fidelity --channel " + channel + " --method design --design " + design);
    RunResult povm = run_cli("fidelity --channel " + channel + " --method povm --design " + design);
    REQUIRE(gen.exit_code == 0);
    REQUIRE(des.exit_code == 0);
    REQUIRE(povm.exit_code == 0);
    double f_gen = json::parse(gen.stdout_text)["value"].get<double>();
    double f_des = json::parse(des.stdout_text)["value"].get<double>();
    double f_povm = json::parse(povm.stdout_text)["value"].get<double>();
    CHECK(std::abs(f_gen - f_des) < 1e-10);
    CHECK(std::abs(f_des - f_povm) < 1e-14);

    // design method without --design is a domain error
    RunResult missing = run_cli("fidelity --channel " + channel + " --method design");
    CHECK(missing.exit_code == 1);
    CHECK(json::parse(missing.stdout_text)["code"] == "bad_argument");

    std::remove(channel.c_str());
    std::remove(design.c_str());
}

TEST_CASE("kraus-random channel files are byte-identical for a fixed seed") {
    std::string a = temp_path("rand_a.json");
    std::string b = temp_path("rand_b.json");
    REQUIRE(run_cli("channel-gen --kind kraus-random --dim 2 --k 4 --seed 1 -o " + a).exit_code ==
            0);
    REQUIRE(run_cli("channel-gen --kind kraus-random --dim 2 --k 4 --seed 1 -o " + b).exit_code ==
            0);
    CHECK(read_file(a) == read_file(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("unitary-random channel has a single near-unitary Kraus operator") {
    std::string path = temp_path("unitary.json");
    RunResult gen = run_cli("channel-gen --kind unitary-random --dim 4 --seed 2 -o " + path);
    REQUIRE(gen.exit_code == 0);
    json doc = json::parse(gen.stdout_text);
    CHECK(doc["kraus_count"] == 1);
    CHECK(doc["tp_residual"].get<double>() < 1e-10);
    std::remove(path.c_str());
}

TEST_CASE("mc fidelity output is byte-identical across runs and worker counts") {
    std::string channel = temp_path("mc_ch.json");
    REQUIRE(run_cli("channel-gen --kind kraus-random --dim 2 --k 2 --seed 9 -o " + channel)
                .exit_code == 0);
    std::string base = "fidelity --channel " + channel + " --method mc --samples 10000 --seed 3";
    RunResult first = run_cli(base + " --workers 1");
    RunResult again = run_cli(base + " --workers 1");
    RunResult parallel = run_cli(base + " --workers 4");
    REQUIRE(first.exit_code == 0);
    CHECK(first.stdout_text == again.stdout_text);
    CHECK(first.stdout_text == parallel.stdout_text);
    std::remove(channel.c_str());
}

TEST_CASE("selftest orthogonality reports residuals under the 5-sigma envelope") {
    RunResult result = run_cli("selftest orthogonality --dim 2 --samples 5000 --seed 7");
    REQUIRE(result.exit_code == 0);
    json doc = json::parse(result.stdout_text);
    double scale = doc["standard_error_scale"].get<double>();
    CHECK(doc["first_moment_residual"].get<double>() < 5.0 * scale);
    CHECK(doc["second_moment_residual"].get<double>() < 5.0 * scale);
}

TEST_CASE("selftest all passes at d=2") {
    RunResult result = run_cli("selftest all --dim 2 --seed 7 --samples 5000");
    CHECK(result.exit_code == 0);
    json doc = json::parse(result.stdout_text);
    CHECK(doc["pass"] == true);
    for (const json& check : doc["checks"]) {
        CHECK(check["pass"] == true);
    }
}

TEST_CASE("exit-code contract: usage 2, domain errors 1 with JSON objects") {
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("fidelity --channel x.json").exit_code == 2); // missing --method
    CHECK(run_cli("basis").exit_code == 2);                     // missing --dim
    CHECK(run_cli("basis --dim 1").exit_code == 2);             // dim below the valid range
    CHECK(run_cli("fidelity --channel x.json --method mc --tp-tol -1").exit_code == 2);

    RunResult missing_file = run_cli("fidelity --channel /nonexistent.json --method generators");
    CHECK(missing_file.exit_code == 1);
    json doc = json::parse(missing_file.stdout_text);
    CHECK(doc["code"] == "io");
    CHECK(doc.contains("message"));
    CHECK(doc.contains("context"));

    // a file that parses but violates trace preservation
    std::string path = temp_path("broken.json");
    {
        std::ofstream out(path);
        out << R"({"dim": 2, "kraus": [[[[0.9, 0], [0, 0]], [[0, 0], [0.9, 0]]]]})";
    }
    RunResult broken = run_cli("fidelity --channel " + path + " --method generators");
    CHECK(broken.exit_code == 1);
    CHECK(json::parse(broken.stdout_text)["code"] == "not_trace_preserving");
    std::remove(path.c_str());

    CHECK(run_cli("basis --dim 3").exit_code == 0);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("FIDELIUM_SEED environment variable is the default seed") {
    std::string with_env = temp_path("env_a.json");
    std::string with_flag = temp_path("env_b.json");
    std::string old_cmd = "FIDELIUM_SEED=77 " + cli_path() +
                          " channel-gen --kind kraus-random --dim 2 --k 2 -o " + with_env +
                          " > /dev/null 2>&1";
    REQUIRE(std::system(old_cmd.c_str()) == 0);
    REQUIRE(run_cli("channel-gen --kind kraus-random --dim 2 --k 2 --seed 77 -o " + with_flag)
                .exit_code == 0);
    CHECK(read_file(with_env) == read_file(with_flag));
    std::remove(with_env.c_str());
    std::remove(with_flag.c_str());
}
