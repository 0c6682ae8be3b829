#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "orlicz/io.hpp"
#include "orlicz/orlicz.hpp"

using namespace orlicz;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    auto p = fs::temp_directory_path() / "orlicz_io_test";
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Numbers, InfinityToken) {
    EXPECT_EQ(io::format_number(kInf), "inf");
    EXPECT_TRUE(std::isinf(io::parse_number("inf")));
    EXPECT_DOUBLE_EQ(io::parse_number(io::format_number(0.1)), 0.1);
    EXPECT_THROW(io::parse_number("abc"), Error);
}

TEST(Weight, SpecStrings) {
    const auto w = io::parse_weight("power:q=2", 2);
    EXPECT_EQ(w.kind(), WeightKind::Power);
    EXPECT_DOUBLE_EQ(w.parameter(), 2.0);
    EXPECT_EQ(io::parse_weight("constant", 1).kind(), WeightKind::Constant);
    EXPECT_EQ(io::parse_weight(R"({"kind": "stretched_exp", "alpha": 0.5})", 1).kind(), WeightKind::StretchedExp);
    EXPECT_THROW(io::parse_weight("cubic", 1), Error);
    const auto back = io::weight_from_json(io::weight_to_json(w), 2);
    EXPECT_EQ(back.kind(), w.kind());
    EXPECT_EQ(back.parameter(), w.parameter());
}

TEST(Body, RoundTrip) {
    for (const auto& k : {ConvexBody::box(1, 2), ConvexBody::interval(-1, 3), ConvexBody::regular_polygon(1, 7, 0.1)}) {
        const auto back = io::body_from_json(io::body_to_json(k));
        ASSERT_EQ(back.vertices().size(), k.vertices().size());
        for (std::size_t i = 0; i < k.vertices().size(); ++i) {
            EXPECT_EQ(back.vertices()[i][0], k.vertices()[i][0]);
            EXPECT_EQ(back.vertices()[i][1], k.vertices()[i][1]);
        }
    }
}

TEST(Grid, SpecAndJson) {
    const auto g = io::parse_grid("6,65", 2);
    EXPECT_EQ(g.points(1), 65);
    EXPECT_DOUBLE_EQ(g.half_width(0), 6.0);
    EXPECT_THROW(io::parse_grid("6", 1), Error);
    EXPECT_TRUE(io::grid_from_json(io::grid_to_json(g)).same_shape(g));
}

TEST(Function, PrototypeRoundTrip) {
    const std::vector<LogConcaveFunction> fs{
        LogConcaveFunction(Prototype::exponential_cone(1, 0.5)),
        LogConcaveFunction(Prototype::gaussian(2)),
        LogConcaveFunction(Prototype::scaled_indicator(2.0, ConvexBody::box(1, 1))),
        LogConcaveFunction(Prototype::max_affine(1, {{1, 0}, {-1, 0}}, {0.2, 0.2})),
        LogConcaveFunction(Prototype::exponential_cone(1).restricted_to(ConvexBody::interval(-1, 1))),
    };
    for (const auto& f : fs) {
        const auto back = io::function_from_json(io::function_to_json(f));
        for (double x : {-0.7, 0.0, 0.4, 1.5})
            for (double y : {0.0, 0.3}) {
                const Vec p{x, f.dim() == 1 ? 0.0 : y};
                EXPECT_EQ(back.phi(p), f.phi(p)) << f.description();
            }
    }
}

TEST(Function, GridDataFile) {
    const auto dir = scratch();
    const Grid g(1, 4.0, 33);
    const auto phi = LogConcaveFunction(Prototype::gaussian(1).restricted_to(ConvexBody::interval(-2, 2))).to_grid(g);
    io::write_text(dir / "vals.csv", io::values_to_csv(phi));
    io::write_text(dir / "f.json", R"({"kind": "grid", "grid": {"dim": 1, "R": 4, "m": 33}, "values_file": "vals.csv"})");
    const auto back = io::load_function((dir / "f.json").string());
    ASSERT_FALSE(back.is_prototype());
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_EQ(back.sampled().finite(k), phi.finite(k));
        if (phi.finite(k)) {
            EXPECT_EQ(back.sampled().value(k), phi.value(k));
        }
    }
}

TEST(Function, Errors) {
    EXPECT_THROW(io::function_from_json(io::parse_json(R"({"kind": "banana"})", "test")), Error);
    EXPECT_THROW(io::parse_json("{not json", "test"), Error);
    EXPECT_THROW(io::load_function("/nonexistent/f.json"), Error);
}

TEST(Measure, CsvRoundTrip) {
    DiscreteMeasure m(Ambient::Euclidean, 2);
    m.add(Vec{1.0 / 3, -2}, 0.1);
    m.add(Vec{-1.0 / 3, 2}, 0.1);
    const auto back = io::parse_measure_csv(io::measure_to_csv(m));
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back.atoms()[i].x[0], m.atoms()[i].x[0]);
        EXPECT_EQ(back.atoms()[i].mass, m.atoms()[i].mass);
    }
    const auto j = io::measure_from_json(io::measure_to_json(m));
    EXPECT_EQ(j.total_mass(), m.total_mass());
}

TEST(Measure, CsvValidation) {
    EXPECT_THROW(io::parse_measure_csv("weight,x\n1,2\n"), Error);
    EXPECT_THROW(io::parse_measure_csv("mass,x1\n1\n"), Error);
    EXPECT_EQ(io::parse_measure_csv("mass,x1\n1,2\n1,-2\n").dim(), 1);
}

TEST(Measure, ReingestedMeasureGivesSameSolve) {
    DiscreteMeasure m(Ambient::Euclidean, 1);
    m.add(Vec{1, 0}, 1);
    m.add(Vec{-1, 0}, 1);
    m.add(Vec{2, 0}, 0.5);
    m.add(Vec{-2, 0}, 0.5);
    const auto back = io::parse_measure_csv(io::measure_to_csv(m));
    const auto a = solve(TargetMeasure(m), WeightFunction::constant(1));
    const auto b = solve(TargetMeasure(back), WeightFunction::constant(1));
    EXPECT_EQ(a.v, b.v);
}

TEST(Report, FlattenCsv) {
    io::json j;
    j["a"] = 1;
    j["b"]["c"] = "x";
    const auto s = io::flatten_csv(j);
    EXPECT_NE(s.find("b.c"), std::string::npos);
}
