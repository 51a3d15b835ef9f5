#include "bathlab/checkpoint.hpp"
#include "bathlab/csv.hpp"

#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

using namespace bathlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "bathlab_unit_io";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("io")
{
    TEST_CASE("shortest round-trip number format")
    {
        CHECK(format_number(0.1) == "0.1");
        CHECK(format_number(1e-300) == "1e-300");
        CHECK(format_number(-0.0) == "0");
        CHECK(format_number(3.0) == "3");
        CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
        CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1e6, 1e6);
        for (int k = 0; k < 1000; ++k) {
            const double x = u(rng) * std::pow(10.0, (k % 40) - 20);
            const std::string s = format_number(x);
            double y = 0.0;
            std::from_chars(s.data(), s.data() + s.size(), y);
            CHECK(y == x);
        }
    }

    TEST_CASE("csv writer layout")
    {
        const fs::path p = scratch("t.csv");
        {
            CsvWriter w(p, {"a", "b", "c"});
            w.cell(1.5).cell(2).cell(std::string("x"));
            w.end_row();
        }
        std::ifstream in(p);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(all == "a,b,c\n1.5,2,x\n");
    }

    TEST_CASE("checkpoint round trip is bit exact")
    {
        DistributionState s;
        s.coeff = Eigen::MatrixXcd::Random(64, 27);
        s.c_infinity = 1.25;
        s.time = 5.0;
        s.step = 500;
        const CheckpointHeader h{6.0, 4, 1, 0.01};
        const fs::path p = scratch("c.bin");
        save_checkpoint(p, h, s);
        const Checkpoint c = load_checkpoint(p);
        CHECK(c.state.coeff == s.coeff);
        CHECK(c.state.step == 500);
        CHECK(c.state.time == 5.0);
        CHECK(c.state.c_infinity == 1.25);
        CHECK(c.header.extent == 6.0);
        CHECK(c.header.points_per_axis == 4);
        CHECK(c.header.max_mode == 1);
        CHECK(c.header.dt == 0.01);
    }

    TEST_CASE("corrupted or truncated checkpoints are rejected")
    {
        DistributionState s;
        s.coeff = Eigen::MatrixXcd::Random(8, 27);
        const fs::path p = scratch("d.bin");
        save_checkpoint(p, CheckpointHeader{6.0, 2, 1, 0.01}, s);
        std::string bytes;
        {
            std::ifstream in(p, std::ios::binary);
            bytes.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        }
        std::string flipped = bytes;
        flipped[100] ^= 1;
        std::ofstream(scratch("e.bin"), std::ios::binary) << flipped;
        CHECK_THROWS_AS(load_checkpoint(scratch("e.bin")), ConfigError);
        std::ofstream(scratch("f.bin"), std::ios::binary) << bytes.substr(0, bytes.size() - 9);
        CHECK_THROWS_AS(load_checkpoint(scratch("f.bin")), ConfigError);
        std::ofstream(scratch("g.bin"), std::ios::binary) << "nope";
        CHECK_THROWS_AS(load_checkpoint(scratch("g.bin")), ConfigError);
        CHECK_THROWS_AS(load_checkpoint(scratch("missing.bin")), ConfigError);
    }
}
