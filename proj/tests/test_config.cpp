#include <string>

#include "collab/config.hpp"
#include "doctest.h"

using namespace collab;

namespace {

const char* kRefConfig = R"(# reference configuration
[model]
p1 = 1.0
p2 = 1.0
lambda1 = 2.2222222222222223
lambda2 = 2.2222222222222223
claim1_kind = "exponential"
claim1_rate = 3.0
claim2_kind = "exponential"
claim2_rate = 3.0
delta = 0.1
a1 = 0.5
[grid]
step = 0.02
x_max = 6.0
y_max = 6.0
[iterate]
iterations = 20
fixed_point_tol = 1e-6
v0_convention = "payoff"
[simulate]
paths = 100000
seed = 1
)";

}  // namespace

TEST_CASE("parse and round-trip losslessly") {
    RunConfig c = RunConfig::parse(kRefConfig);
    CHECK(c.lambda1 == doctest::Approx(20.0 / 9.0));
    CHECK(c.step == 0.02);
    CHECK(c.iterations == 20);
    RunConfig again = RunConfig::parse(c.serialize());
    CHECK(again.serialize() == c.serialize());
    CHECK(again.hash() == c.hash());
    CHECK(again.lambda1 == c.lambda1);  // bit-exact through 17 digits
}

TEST_CASE("hash changes with any field") {
    RunConfig a = RunConfig::parse(kRefConfig);
    RunConfig b = a;
    b.seed = 2;
    CHECK(a.hash() != b.hash());
    RunConfig c = a;
    c.delta = 0.11;
    CHECK(a.hash() != c.hash());
}

TEST_CASE("unknown keys are an error naming the line") {
    std::string bad = std::string("[model]\np1 = 1.0\nbogus = 3\n");
    CHECK_THROWS_WITH_AS(RunConfig::parse(bad), doctest::Contains("line 3"), std::runtime_error);
    CHECK_THROWS_WITH_AS(RunConfig::parse(bad), doctest::Contains("bogus"), std::runtime_error);
}

TEST_CASE("malformed numbers name the field") {
    std::string bad = "[model]\ndelta = abc\n";
    CHECK_THROWS_WITH_AS(RunConfig::parse(bad), doctest::Contains("model.delta"),
                         std::runtime_error);
}

TEST_CASE("missing equals sign is a parse error") {
    CHECK_THROWS_AS(RunConfig::parse("[model]\np1 1.0\n"), std::runtime_error);
}

TEST_CASE("invalid continuation-weight convention is rejected") {
    CHECK_THROWS_AS(RunConfig::parse("[iterate]\nv0_convention = \"other\"\n"),
                    std::runtime_error);
}

TEST_CASE("derived model objects") {
    RunConfig c = RunConfig::parse(kRefConfig);
    ModelParams p = c.make_params();
    CHECK(p.lambda() == doctest::Approx(40.0 / 9.0));
    CHECK(p.law1.is_exponential());
    Grid2D g = c.make_grid();
    CHECK(g.nx == 301);
    CHECK(g.ny == 301);
    CHECK(g.x_max() == doctest::Approx(6.0));
    CHECK(c.make_convention() == V0Convention::payoff);
}

TEST_CASE("validation failures surface when building params") {
    RunConfig c = RunConfig::parse(kRefConfig);
    c.p1 = 0.1;  // net profit violated
    CHECK_THROWS_AS(c.make_params(), std::exception);
}
