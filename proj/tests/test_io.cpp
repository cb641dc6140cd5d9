#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nlcl/snapshot_io.hpp"
#include "support.hpp"

using namespace nlcl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "nlcl_test_io";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string l;
    while (std::getline(in, l))
        out.push_back(l);
    return out;
}

Snapshot random_snapshot(const Grid& g, unsigned seed, std::size_t classes)
{
    std::mt19937_64 rng(seed);
    Snapshot s;
    s.t = 0.1 * seed + 1.0 / 3.0;
    for (std::size_t c = 0; c < classes; ++c)
        s.rho.push_back(test::random_field(g, rng, 0.0, 3.0));
    return s;
}

} // namespace

TEST_CASE("single cell snapshot")
{
    Snapshot s{0.0, {Field2D(Grid(1, 1, 1.0, 1.0), 0.25)}};
    const auto l = lines(snapshot_csv(s));
    REQUIRE(l.size() == 2u);
    CHECK(l[0] == "t,class,i,j,x,y,rho");
    CHECK(l[1] == "0,1,0,0,0.5,0.5,0.25");
    CHECK(snapshot_csv(s).find('\r') == std::string::npos);
}

TEST_CASE("csv rows are ordered by class, row, column")
{
    const Grid g(3, 2, 0.5, 0.5);
    const Snapshot s = random_snapshot(g, 1, 2);
    const auto l = lines(snapshot_csv(s));
    REQUIRE(l.size() == 13u);
    CHECK(l[1].rfind(format_real(s.t) + ",1,0,0,", 0) == 0);
    CHECK(l[2].rfind(format_real(s.t) + ",1,1,0,", 0) == 0);
    CHECK(l[4].rfind(format_real(s.t) + ",1,0,1,", 0) == 0);
    CHECK(l[7].rfind(format_real(s.t) + ",2,0,0,", 0) == 0);
}

TEST_CASE("csv round trip")
{
    const Grid g(17, 9, 0.005, 0.01, 0.2, -0.1);
    const Snapshot a = random_snapshot(g, 2, 2);
    const Snapshot b = parse_snapshot_csv(snapshot_csv(a));
    CHECK(b.t == a.t);
    REQUIRE(b.rho.size() == 2u);
    CHECK(b.rho[0].grid().nx == 17);
    CHECK(b.rho[0].grid().dy == doctest::Approx(0.01).epsilon(1e-12));
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(l1_distance(Field2D(g, b.rho[c].values()), a.rho[c]) <= 1e-15);
        CHECK(b.rho[c].values() == a.rho[c].values());
    }
    const Snapshot h = parse_snapshot_csv(snapshot_csv(a), &g);
    CHECK(h.rho[1].values() == a.rho[1].values());
    const Grid other(16, 9, 0.005, 0.01);
    CHECK_THROWS_AS(parse_snapshot_csv(snapshot_csv(a), &other), IoError);
}

TEST_CASE("csv output is deterministic")
{
    const Grid g(8, 8, 0.1, 0.1);
    CHECK(snapshot_csv(random_snapshot(g, 3, 2)) == snapshot_csv(random_snapshot(g, 3, 2)));
    const fs::path p1 = scratch("a.csv"), p2 = scratch("b.csv");
    write_snapshot_csv(random_snapshot(g, 3, 2), p1.string());
    write_snapshot_csv(random_snapshot(g, 3, 2), p2.string());
    CHECK(read_text(p1.string()) == read_text(p2.string()));
}

TEST_CASE("binary round trip")
{
    const Grid g(11, 6, 0.02, 0.03);
    const Snapshot a = random_snapshot(g, 4, 3);
    const fs::path p = scratch("snap.bin");
    write_snapshot_binary(a, p.string());
    CHECK(fs::file_size(p) == 16u + 8u * 11u * 6u * 3u);

    const std::string raw = read_text(p.string());
    CHECK(raw.substr(0, 4) == "NLCL");
    CHECK(static_cast<unsigned char>(raw[4]) == 11);
    CHECK(static_cast<unsigned char>(raw[8]) == 6);
    CHECK(static_cast<unsigned char>(raw[12]) == 3);

    const Snapshot b = read_snapshot_binary(p.string(), &g);
    REQUIRE(b.rho.size() == 3u);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(b.rho[c].values() == a.rho[c].values());
    CHECK(b.rho[0].grid().dx == g.dx);
}

TEST_CASE("outflow csv")
{
    const std::string s = outflow_csv({0.0, 0.5}, {{1.0, 1.0}, {0.75, 0.5}});
    const auto l = lines(s);
    REQUIRE(l.size() == 3u);
    CHECK(l[0] == "t,U_class1,U_class2");
    CHECK(l[1] == "0,1,1");
    CHECK(l[2] == "0.5,0.75,0.5");
    CHECK_THROWS_AS(outflow_csv({0.0}, {}), StructuralError);
}

TEST_CASE("real formatting keeps full precision")
{
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_real(x)) == x);
    CHECK(format_real(1.0) == "1");
}

TEST_CASE("io errors")
{
    CHECK_THROWS_AS(read_text("/nonexistent/nlcl/file.csv"), IoError);
    CHECK_THROWS_AS(write_text("/nonexistent/nlcl/file.csv", "x"), IoError);
    CHECK_THROWS_AS(parse_snapshot_csv("a,b,c\n"), IoError);
    CHECK_THROWS_AS(parse_snapshot_csv("t,class,i,j,x,y,rho\n"), IoError);
    CHECK_THROWS_AS(parse_snapshot_csv("t,class,i,j,x,y,rho\n0,1,0,0,0.5,0.5,abc\n"), IoError);
    CHECK_THROWS_AS(parse_snapshot_csv("t,class,i,j,x,y,rho\n0,1,0,0,0.5,0.5\n"), IoError);
    CHECK_THROWS_AS(parse_snapshot_csv("t,class,i,j,x,y,rho\n0,1,0,0,0.5,0.5,1\n0,1,1,0,1.5,0.5,1\n"
                                       "0,1,0,1,0.5,1.5,1\n"),
                    IoError);

    const fs::path p = scratch("bad.bin");
    write_text(p.string(), "JUNKJUNKJUNKJUNK");
    CHECK_THROWS_AS(read_snapshot_binary(p.string()), IoError);
    write_text(p.string(), std::string("NLCL\x02\0\0\0\x02\0\0\0\x01\0\0\0", 16));
    CHECK_THROWS_AS(read_snapshot_binary(p.string()), IoError);
}
