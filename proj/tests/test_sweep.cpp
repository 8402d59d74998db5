#include <doctest.h>

#include <sstream>

#include "veeww/io.hpp"
#include "veeww/sweep/config.hpp"
#include "veeww/sweep/run.hpp"

using namespace veeww;
using namespace veeww::sweep;

namespace {

int run_text(const std::string& text, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code = 0;
    try {
        code = run(parse_config_text(text), out, err);
    } catch (const ConfigError&) {
        code = kExitConfig;
    }
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

io::CsvTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    return io::read_csv(in);
}

std::size_t column(const io::CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

double tau_at(double ratio, double eps) {
    RunConfig c = preset("delta-0.1");
    c.params = NaturalBlock{ratio, eps};
    c.grid.values = {eps};
    const auto t = parse_csv(produce(c).primary);
    return std::stod(t.rows.at(0).at(column(t, "tau_gamma")));
}

void check_round_trip(const RunConfig& config) {
    const Artifacts first = produce(config);
    const RunConfig recovered = config_from_artifact(first.primary);
    CHECK(to_json(recovered) == to_json(config));
    const Artifacts second = produce(recovered);
    CHECK(second.primary == first.primary);
    CHECK(second.summary == first.summary);
    for (const std::string* text : {&first.primary, &first.summary}) {
        if (text->empty()) continue;
        if (text->front() == '{') CHECK(nlohmann::json::parse(*text)["config"] == to_json(config));
        else CHECK(text->rfind("# " + config_echo(config) + "\n", 0) == 0);
    }
}

}  // namespace

TEST_CASE("config validation errors exit with 2") {
    CHECK(run_text(R"({"mode": "tau-curve", "bogus": 1})") == kExitConfig);
    CHECK(run_text(R"({"mode": "nope"})") == kExitConfig);
    CHECK(run_text(R"({"mode": "tau-curve", "grid": {"min": 0.0, "spacing": "log"}})") == kExitConfig);
    CHECK(run_text(R"({"mode": "tau-curve", "params": {"delta_over_gamma": 0.1},
                       "si": {"omega": 1e15, "eta": 1e-29, "delta": 1e6}})") == kExitConfig);
    CHECK(run_text(R"({"mode": "mc", "mc": {"n": 10}})") == kExitConfig);
    CHECK(run_text(R"({"mode": "weak-value", "params": {"epsilon": 0.0}})") == kExitConfig);
    CHECK(run_text(R"({"mode": "weak-value", "params": {"epsilon": 2.0}})") == kExitConfig);
    CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
    CHECK_THROWS_AS(preset("fig9"), ConfigError);
}

TEST_CASE("unphysical scalar requests exit with 3 and name the threshold") {
    std::string err;
    CHECK(run_text(R"({"mode": "mc", "params": {"delta_over_gamma": 0.1, "epsilon": 0.05}})", nullptr, &err) ==
          kExitUnphysical);
    CHECK(err.find("Delta/Gamma") != std::string::npos);
    CHECK(run_text(R"({"mode": "evolve", "params": {"delta_over_gamma": 0.1, "epsilon": 0.05},
                       "bath": {"method": "markov"}})") == kExitUnphysical);
}

TEST_CASE("tau-curve delta-0.1 preset is strictly decreasing and flags nothing") {
    const RunConfig c = preset("delta-0.1");
    CHECK(c.delta_over_gamma() == 0.1);
    const auto t = parse_csv(produce(c).primary);
    CHECK(t.rows.size() == 200);
    const auto tc = column(t, "tau_gamma");
    const auto pc = column(t, "physical");
    CHECK(std::stod(t.rows.front()[column(t, "epsilon")]) == doctest::Approx(0.11));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(t.rows[i][pc] == "1");
        if (i > 0) CHECK(std::stod(t.rows[i][tc]) < std::stod(t.rows[i - 1][tc]));
    }
}

TEST_CASE("curve mode flags unphysical rows and exits 0") {
    std::string out;
    CHECK(run_text(R"({"mode": "tau-curve", "params": {"delta_over_gamma": 0.1},
                       "grid": {"values": [0.05, 0.2]}})", &out) == kExitOk);
    const auto t = parse_csv(out);
    CHECK(t.rows[0][column(t, "physical")] == "0");
    CHECK(t.rows[0][column(t, "tau_gamma")] == "inf");
    CHECK(t.rows[1][column(t, "physical")] == "1");
}

TEST_CASE("smaller splitting gives weaker amplification at fixed eps") {
    const double small = tau_at(0.01, 0.2);
    const double large = tau_at(0.1, 0.2);
    CHECK(small == doctest::Approx(1.0 / 0.95).epsilon(1e-12));
    CHECK(large == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(small < large);
}

TEST_CASE("weak-value mode JSON") {
    std::string out;
    CHECK(run_text(R"({"mode": "weak-value", "params": {"epsilon": 0.7853981633974483}})", &out) == kExitOk);
    const auto j = nlohmann::json::parse(out);
    CHECK(std::abs(j["re"].get<double>()) < 1e-12);
    CHECK(j["im"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(j.contains("config"));
}

TEST_CASE("delta-0.01 preset") {
    const RunConfig c = preset("delta-0.01");
    CHECK(c.delta_over_gamma() == 0.01);
    const auto t = parse_csv(produce(c).primary);
    CHECK(std::stod(t.rows.front()[column(t, "tau_gamma")]) == doctest::Approx(101.0).epsilon(1e-9));
}

TEST_CASE("artifacts round-trip bit-identically from their embedded config") {
    check_round_trip(preset("delta-0.1"));

    RunConfig wv = parse_config_text(R"({"mode": "weak-value", "params": {"epsilon": 0.3}})");
    check_round_trip(wv);

    RunConfig ev = parse_config_text(R"({"mode": "evolve", "params": {"delta_over_gamma": 0.01, "epsilon": 0.3},
        "bath": {"cutoff_over_gamma": 25, "n_modes": 2048, "dt_gamma": 0.004, "t_end_gamma": 1}})");
    check_round_trip(ev);
    ev.bath.method = EvolveMethod::kernel;
    check_round_trip(ev);
    ev.bath.method = EvolveMethod::markov;
    check_round_trip(ev);

    RunConfig mc = parse_config_text(R"({"mode": "mc", "mc": {"n": 2000, "seed": 5}})");
    check_round_trip(mc);
    mc.mc.model = McModel::conditional;
    check_round_trip(mc);

    RunConfig cmp = parse_config_text(R"({"mode": "compare", "params": {"delta_over_gamma": 0.01},
        "grid": {"values": [0.05, 0.5]}, "mc": {"n": 1000},
        "bath": {"cutoff_over_gamma": 25, "n_modes": 2048, "dt_gamma": 0.004}})");
    check_round_trip(cmp);

    RunConfig si = parse_config_text(R"({"mode": "tau-curve",
        "si": {"omega": 2.416e15, "eta": 2.537e-29, "delta": 3.8e6, "epsilon": 0.3},
        "grid": {"count": 5, "min": 0.2}})");
    check_round_trip(si);
    const auto t = parse_csv(produce(si).primary);
    CHECK(t.header.back() == "rate_per_s");
    const double ratio = si.delta_over_gamma();
    CHECK(ratio == doctest::Approx(3.8e6 / 38280147.048686326).epsilon(1e-10));
}

TEST_CASE("compare mode rows follow the grid for any worker count") {
    RunConfig cmp = parse_config_text(R"({"mode": "compare", "params": {"delta_over_gamma": 0.01},
        "grid": {"values": [0.005, 0.05, 0.5, 1.2]}, "mc": {"n": 2000},
        "bath": {"cutoff_over_gamma": 25, "n_modes": 2048, "dt_gamma": 0.004}})");
    const std::string one = produce(cmp).primary;
    cmp.workers = 3;
    const std::string three = produce(cmp).primary;
    CHECK(one.substr(one.find('\n')) == three.substr(three.find('\n')));

    const auto t = parse_csv(one);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0][column(t, "physical")] == "0");
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(t.rows[i][column(t, "physical")] == "1");
        CHECK(std::abs(std::stod(t.rows[i][column(t, "rate_bath_rel_dev")])) < 0.05);
        CHECK(std::abs(std::stod(t.rows[i][column(t, "tau_mc_rel_dev")])) < 0.15);
    }
}

TEST_CASE("csv reader") {
    const auto t = parse_csv("# a\n# b\nx,y\n1,2\n3,4\n");
    CHECK(t.comments == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK_THROWS(parse_csv("x,y\n1\n"));
    CHECK_THROWS(parse_csv("x,y\r\n1,2\r\n"));
    CHECK_THROWS(parse_csv("# only\n"));
    CHECK(io::format_double(0.1) == "0.1");
}
