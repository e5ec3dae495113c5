#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "wilson/io.hpp"

using namespace wilson;

namespace {

GaugeField sample_field()
{
    const auto g = make_geometry(2, 3);
    FluxMatrix k(2);
    k.set(0, 1, 1);
    return perturb_field(tensor_field(constant_flux_field(g, k), trivial_field(g, 2)), 0.1, 9);
}

std::string as_wgf1(const GaugeField& f, const std::string& comment = "")
{
    std::ostringstream out;
    write_wgf1(out, f, comment);
    return out.str();
}

// Byte offset of the binary payload: after the third newline.
std::size_t payload_offset(const std::string& s)
{
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i)
        pos = s.find('\n', pos) + 1;
    return pos;
}

} // namespace

TEST_CASE("WGF1 round trip is bit exact")
{
    const auto f = sample_field();
    std::istringstream in(as_wgf1(f, "sample\nwith newline"));
    const auto g = read_wgf1(in);
    CHECK(g.geometry() == f.geometry());
    CHECK(g.rank() == f.rank());
    REQUIRE(g.data().size() == f.data().size());
    for (std::size_t i = 0; i < f.data().size(); ++i)
        CHECK(g.data()[i] == f.data()[i]);
    CHECK_FALSE(g.line_summands);
}

TEST_CASE("WGF1 header and payload layout")
{
    const auto f = sample_field();
    const auto s = as_wgf1(f, "hello");
    CHECK(s.rfind("WGF1\n2 3 2\n# hello\n", 0) == 0);
    const std::size_t off = payload_offset(s);
    CHECK(s.size() - off == 9 * 2 * 4 * 16);
    // second double of the first link is Im U(0,0), little endian, row major
    double re = 0.0, im = 0.0;
    std::memcpy(&re, s.data() + off, 8);
    std::memcpy(&im, s.data() + off + 8, 8);
    CHECK(re == f.link(0, 0)(0, 0).real());
    CHECK(im == f.link(0, 0)(0, 0).imag());
    double re01 = 0.0;
    std::memcpy(&re01, s.data() + off + 16, 8);
    CHECK(re01 == f.link(0, 0)(0, 1).real());
}

TEST_CASE("WGF1 file round trip")
{
    const auto path = std::filesystem::temp_directory_path() / "wilson_test_io.wgf1";
    const auto f = sample_field();
    save_gauge_field(path, f, "file");
    const auto g = load_gauge_field(path);
    for (std::size_t i = 0; i < f.data().size(); ++i)
        CHECK(g.data()[i] == f.data()[i]);
    std::filesystem::remove(path);
    CHECK_THROWS_WITH_AS(load_gauge_field(path), doctest::Contains("cannot open"), Error);
}

TEST_CASE("WGF1 rejects malformed input")
{
    const auto good = as_wgf1(sample_field());
    auto read = [](const std::string& s) {
        std::istringstream in(s);
        return read_wgf1(in);
    };
    CHECK_THROWS_WITH_AS(read("WGF2\n" + good.substr(5)), doctest::Contains("bad magic"), Error);
    CHECK_THROWS_WITH_AS(read("WGF1\n2 3\n# x\n"), doctest::Contains("malformed dimension"), Error);
    CHECK_THROWS_WITH_AS(read("WGF1\n2 3 x\n# x\n"), doctest::Contains("malformed dimension"), Error);
    CHECK_THROWS_WITH_AS(read("WGF1\n2 3 1\nno comment\n"), doctest::Contains("missing comment"), Error);
    CHECK_THROWS_WITH_AS(read("WGF1\n2 1 1\n# x\n"), doctest::Contains("out of range"), Error);
    CHECK_THROWS_WITH_AS(read("WGF1\n"), doctest::Contains("missing dimension"), Error);
    CHECK_THROWS_WITH_AS(read(good.substr(0, good.size() - 3)), doctest::Contains("truncated"), Error);
    CHECK_THROWS_WITH_AS(read(good + "x"), doctest::Contains("trailing data"), Error);

    // scale one link entry off the unit circle
    auto bad = good;
    const std::size_t off = payload_offset(bad);
    double re = 0.0;
    std::memcpy(&re, bad.data() + off, 8);
    re *= 1.001;
    std::memcpy(bad.data() + off, &re, 8);
    CHECK_THROWS_WITH_AS(read(bad), doctest::Contains("not unitary"), Error);

    // a deviation far below the load tolerance is accepted
    auto close = good;
    std::memcpy(&re, close.data() + off, 8);
    re *= 1.0 + 1e-12;
    std::memcpy(close.data() + off, &re, 8);
    CHECK_NOTHROW(read(close));
}

TEST_CASE("WUT1 round trip and errors")
{
    const auto t = clock_shift(5);
    std::ostringstream out;
    write_wut1(out, t, "clock shift");
    const auto s = out.str();
    CHECK(s.rfind("WUT1\n2 5\n# clock shift\n", 0) == 0);
    std::istringstream in(s);
    const auto u = read_wut1(in);
    CHECK(u.d == 2);
    CHECK(u.n == 5);
    CHECK(u.unitaries[0] == t.unitaries[0]);
    CHECK(u.unitaries[1] == t.unitaries[1]);
    CHECK(u.epsilon == doctest::Approx(t.epsilon));

    std::istringstream trunc(s.substr(0, s.size() - 1));
    CHECK_THROWS_WITH_AS(read_wut1(trunc), doctest::Contains("truncated"), Error);
    std::istringstream wrong("WGF1\n2 5\n# x\n");
    CHECK_THROWS_WITH_AS(read_wut1(wrong), doctest::Contains("bad magic"), Error);

    const auto path = std::filesystem::temp_directory_path() / "wilson_test_io.wut1";
    save_unitary_tuple(path, t);
    CHECK(load_unitary_tuple(path).unitaries[1] == t.unitaries[1]);
    std::filesystem::remove(path);
}

TEST_CASE("unitary tuple validation")
{
    CHECK_THROWS_AS(make_unitary_tuple({}), Error);
    CHECK_THROWS_AS(make_unitary_tuple({CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)}), Error);
    CHECK_THROWS_WITH_AS(make_unitary_tuple({2.0 * CMatrix::Identity(2, 2)}), doctest::Contains("not unitary"),
                         Error);
    const auto t = make_unitary_tuple({CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)});
    CHECK(t.epsilon == 0.0);
    // |[clock, shift]| = |z - 1|
    for (index_t n : {3, 5, 8}) {
        const auto cs = clock_shift(n);
        CHECK(cs.epsilon == doctest::Approx(std::abs(std::polar(1.0, 2 * std::numbers::pi / n) - 1.0)).epsilon(1e-12));
    }
}
