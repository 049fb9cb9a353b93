#include <lck/forms.hpp>
#include <lck/hopf.hpp>
#include <lck/sweep.hpp>

#include <doctest.h>

#include <cstring>
#include <stdexcept>

using namespace lck;

TEST_CASE("map_indexed: parallel output equals the serial reference bitwise")
{
    const auto entry = vaisman_entry(std::vector<double>{1.0, 1.5}, std::vector<double>{1.0, 2.0});
    const auto samples = annulus_samples(2, 500, 7);
    const auto defect = exterior_d(entry.form("Omega")) - wedge(entry.form("theta"), entry.form("Omega"));
    const auto s = residual_profile(defect, samples.points, Exec::serial);
    const auto p = residual_profile(defect, samples.points, Exec::parallel);
    REQUIRE(s.size() == p.size());
    CHECK(std::memcmp(s.data(), p.data(), s.size() * sizeof(double)) == 0);
}

TEST_CASE("map_indexed: the lowest failing index wins")
{
    for (auto exec : {Exec::serial, Exec::parallel}) {
        try {
            sweep::map_indexed(
                200,
                [](std::size_t i) -> int {
                    if (i % 37 == 5) throw std::runtime_error(std::to_string(i));
                    return static_cast<int>(i);
                },
                exec);
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "5");
        }
    }
}

TEST_CASE("map_indexed: empty range")
{
    CHECK(sweep::map_indexed(0, [](std::size_t i) { return i; }).empty());
}

TEST_CASE("argmax ties and NaN")
{
    CHECK(sweep::argmax(std::vector<double>{1, 3, 3, 2}) == 1);
    CHECK(sweep::argmax(std::vector<double>{1, std::nan(""), 5}) == 1);
}
