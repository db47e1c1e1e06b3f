#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace bell4;

namespace {

std::string error_of(const json& j) {
    try {
        parse_state(j);
    } catch (const input_error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(ParseState, PureAmplitudes) {
    const auto s = parse_state(json::parse(R"({"type":"pure","amplitudes":[[0.6,0],[0,0.8]]})"));
    ASSERT_TRUE(s.is_pure());
    EXPECT_EQ(s.num_qubits(), 1);
    EXPECT_NEAR(s.pure()[1].imag(), 0.8, 1e-15);
    EXPECT_THROW(s.density(), input_error);
}

TEST(ParseState, Families) {
    const auto g = parse_state(json::parse(R"({"type":"family","name":"gghz","params":{"alpha":0.3}})"));
    EXPECT_NEAR(g.pure()[15].real(), std::sin(0.3), 1e-15);
    const auto w = parse_state(json::parse(R"({"type":"family","name":"w3","params":{"a":0.2,"b":0.2,"c":0.2}})"));
    EXPECT_EQ(w.num_qubits(), 3);
    const auto h1 = parse_state(json::parse(R"({"type":"family","name":"haar_pure","params":{"seed":5}})"));
    const auto h2 = parse_state(json::parse(R"({"type":"family","name":"haar_pure","params":{"seed":5}})"));
    EXPECT_EQ(h1.pure()[3], h2.pure()[3]);
    const auto g3 = parse_state(json::parse(
        R"({"type":"family","name":"ghz3","params":{"delta":0.5,"alpha":1,"beta":1,"gamma":1,"phi":0}})"));
    EXPECT_EQ(g3.num_qubits(), 3);
}

TEST(ParseState, ProductAndMixture) {
    const auto p = parse_state(json::parse(R"({"type":"product","parts":[
        {"qubits":[2],"state":{"type":"pure","amplitudes":[[0,0],[1,0]]}},
        {"qubits":[1,3,4],"state":{"type":"pure","amplitudes":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}}]})"));
    EXPECT_EQ(p.pure().inner(PureState::basis("0100")), cplx(1));
    const auto m = parse_state(json::parse(R"({"type":"mixed","terms":[
        {"p":0.5,"state":{"type":"family","name":"gghz","params":{"alpha":0}}},
        {"p":0.5,"state":{"type":"maximally_mixed"}}]})"));
    EXPECT_FALSE(m.is_pure());
    EXPECT_NEAR(m.density().purity(), 0.25 + 0.5 / 16 + 0.25 / 16, 1e-14);
}

TEST(ParseState, ErrorsCarryJsonPointer) {
    EXPECT_NE(error_of(json::parse(R"({"type":"family","name":"gghz","params":{"alpha":"x"}})")).find("/params/alpha"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"type":"family","name":"gghz","params":{"alpha":2}})")).find("pi/4"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"type":"mixed","terms":[{"p":0.3,"state":{"type":"maximally_mixed"}}]})")), "");
    EXPECT_NE(error_of(json::parse(R"({"type":"pure","amplitudes":[[1,0],[1,0]]})")), "");
    EXPECT_NE(error_of(json::parse(R"({"type":"bogus"})")), "");
    EXPECT_NE(error_of(json::parse(R"([1,2])")), "");
}

TEST(ParseJsonText, ReportsByteOffset) {
    try {
        parse_json_text("{\"a\": [1, 2,, 3]}", "x.json");
        FAIL();
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("x.json"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
}

TEST(Settings, RoundTrip) {
    Rng rng(1);
    const auto st = oracle::random_settings(rng);
    const auto back = parse_settings(to_json(st));
    for (std::size_t q = 0; q < 4; ++q)
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_NEAR(back.a[q][k], st.a[q][k], 1e-15);
            EXPECT_NEAR(back.b[q][k], st.b[q][k], 1e-15);
        }
}

TEST(Settings, Rejections) {
    EXPECT_THROW(parse_settings(json::parse(R"({"a":[[0,0,1]],"b":[]})")), input_error);
    auto j = to_json(SettingSet::uniform(UnitVector3::z_axis()));
    j["b"][2] = json::array({1, 1, 0});
    try {
        parse_settings(j);
        FAIL();
    } catch (const schema_error& e) {
        EXPECT_EQ(e.path(), "/b/2");
    }
}

TEST(Csv, RoundTripIsExact) {
    CsvRow r;
    r.param = 0.1;
    r.v[0] = 1.0 / 3.0;
    r.v[2] = std::sqrt(2.0);
    r.omega = 4.000000000000001;
    r.label = "gghz";
    r.seed = 18446744073709551615ULL;
    const std::string text = std::string(kCsvHeader) + "\n" + to_csv_line(r) + "\n";
    const auto rows = parse_csv(text);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].param, r.param);
    EXPECT_EQ(*rows[0].v[0], *r.v[0]);
    EXPECT_FALSE(rows[0].v[1].has_value());
    EXPECT_EQ(*rows[0].v[2], *r.v[2]);
    EXPECT_EQ(*rows[0].omega, *r.omega);
    EXPECT_EQ(rows[0].label, "gghz");
    EXPECT_EQ(rows[0].seed, r.seed);
    EXPECT_THROW(parse_csv("a,b\n"), input_error);
}

TEST(Manifest, Fields) {
    const auto m = make_manifest("sweep", {{"x", 1}});
    EXPECT_EQ(m["tool"], "bell4");
    EXPECT_EQ(m["rng"], "mt19937_64+splitmix64");
    EXPECT_EQ(m["command"], "sweep");
    EXPECT_EQ(m["args"]["x"], 1);
}

TEST(Report, JsonShape) {
    OptimizeConfig cfg;
    cfg.restarts = 4;
    const auto r = classify(pure_to_density(oracle::ghz4()), cfg);
    const auto j = to_json(r, cfg);
    EXPECT_EQ(j["violations"].size(), 4u);
    EXPECT_EQ(j["consistent"][0], "unrestricted");
    EXPECT_EQ(j["optimizer"]["restarts"], 4);
    EXPECT_EQ(j["best_settings"].size(), 4u);
}

TEST(Commands, AnalyzeReportsAllQuantities) {
    const auto out = analyze(StateValue{oracle::ghz4()}, oracle::ghz_settings(2));
    EXPECT_NEAR(std::abs(out["values"][1].get<double>()), 2.0, 1e-12);
    EXPECT_NEAR(out["lemma_sum"].get<double>(), 9.0, 1e-12);
    EXPECT_NEAR(out["purity"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(out["total_correlation_norm"].get<double>(), 15.0, 1e-12);
}

TEST(Commands, SweepGridAndValidation) {
    const auto g = sweep_grid(0, 1, 5);
    EXPECT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g[4], 1.0);
    EXPECT_THROW(sweep_grid(1, 0, 5), input_error);
    EXPECT_THROW(sweep_grid(0, 1, 0), input_error);
    SweepOptions o;
    o.to = 2.0;
    EXPECT_THROW(sweep(o), input_error);  // alpha beyond pi/4
    o = {};
    o.family = "nope";
    EXPECT_THROW(sweep(o), input_error);
}

TEST(Commands, SweepRowsAndThreadIndependence) {
    SweepOptions o;
    o.steps = 3;
    o.operators = {1, 3};
    o.cfg.restarts = 4;
    const auto a = sweep(o, 1), b = sweep(o, 3);
    ASSERT_EQ(a.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(to_csv_line(a[k]), to_csv_line(b[k]));
        EXPECT_FALSE(a[k].v[1].has_value());
        EXPECT_TRUE(a[k].v[2].has_value());
    }
    EXPECT_NEAR(*a[2].v[0], 2.0, 1e-6);
}

TEST(Commands, FigureRowsStayInsideSeparableRectangles) {
    FigureOptions o;
    o.samples = 3;
    o.classes = {"fully", "12-3-4", "12-34"};
    o.cfg.restarts = 4;
    const auto rows = figure1(o, 2);
    ASSERT_EQ(rows.size(), 9u);
    for (const auto& r : rows) {
        const auto [b1, b3] = figure_bounds(r.label);
        EXPECT_LE(*r.v[0], b1 + 1e-6) << r.label;
        EXPECT_LE(*r.v[2], b3 + 1e-6) << r.label;
    }
    EXPECT_THROW(figure_bounds("x"), input_error);
    o.classes = {"x"};
    EXPECT_THROW(figure1(o), input_error);
}

TEST(ParallelMap, PreservesOrderAndRethrows) {
    const auto v = parallel_map<int>(10, 4, [](std::size_t k) { return static_cast<int>(k * k); });
    for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(v[k], static_cast<int>(k * k));
    EXPECT_THROW(parallel_map<int>(5, 2, [](std::size_t k) -> int {
                     if (k == 3) throw input_error("boom");
                     return 0;
                 }),
                 input_error);
}
