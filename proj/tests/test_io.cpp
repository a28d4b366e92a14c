#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "unibif/diagram.hpp"
#include "unibif/io.hpp"

using namespace unibif;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(UNIBIF_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string fixture(const std::string& name) { return std::string(UNIBIF_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("unibif_io_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Json, DiagramRoundTrip) {
    const Family F = reparametrized_quadratic();
    const auto spec = GridSpec::for_family(F, 128, 128);
    const auto d = build_diagram(F, 4, spec);
    DiagramDocument doc{F.name(), 4, spec, d.components};
    const auto text = to_json(doc).dump();
    const auto back = diagram_from_json(json::parse(text));
    EXPECT_EQ(back, doc);
    EXPECT_EQ(to_json(back).dump(), text);
    const auto j = json::parse(text);
    EXPECT_EQ(j["components"][0]["bbox"]["tMax"].get<double>(), spec.t_at(d.components[0].bounds().rowMax + 1));
}

TEST(Json, GridDelta) {
    GridSpec g{32, 48, -2.0, 2.0, 1e-5};
    EXPECT_EQ(grid_from_json(to_json(g)), g);
    g.delta.reset();
    EXPECT_TRUE(to_json(g)["delta"].is_null());
    EXPECT_EQ(grid_from_json(to_json(g)), g);
}

TEST(ZeroCellListing, RoundTripAndErrors) {
    ZeroCellSet z{16, 20, {{0, 1, 4}, {3, 0, 20}}};
    std::stringstream ss;
    write_zero_cells(ss, z);
    EXPECT_EQ(ss.str(), "16 20\n0 1 4\n3 0 20\n");
    EXPECT_EQ(read_zero_cells(ss), z);
    std::istringstream bad("16 20\n0 5 3\n");
    EXPECT_THROW(read_zero_cells(bad), std::runtime_error);
    std::istringstream junk("16 20\n0 x 3\n");
    EXPECT_THROW(read_zero_cells(junk), std::runtime_error);
}

TEST(Csv, HeaderAndRows) {
    auto F = Family::from_expression("toy", "t - x^2", std::nullopt, 1.0);
    const auto f = sample_field(F, 1, GridSpec{16, 16, -1.0, 1.0});
    std::stringstream ss;
    write_field_csv(ss, f);
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "t,x,value\r");
    std::getline(ss, line);
    EXPECT_EQ(line, "0,-1,0\r");
    std::size_t rows = 1;
    while (std::getline(ss, line)) ++rows;
    EXPECT_EQ(rows, 17u * 17u);
}

TEST(Config, ParsesFamiliesAndKeys) {
    RunConfig cfg;
    std::ifstream in(fixture("families.cfg"));
    apply_config(cfg, in);
    EXPECT_EQ(cfg.family, "shifted");
    EXPECT_EQ(cfg.nMin, 1);
    EXPECT_EQ(cfg.nMax, 4);
    EXPECT_EQ(cfg.nt, 256);
    EXPECT_EQ(cfg.threads, 2u);
    ASSERT_EQ(cfg.families.size(), 2u);
    EXPECT_EQ(cfg.families["cubic"].M, 2.5);
    EXPECT_FALSE(cfg.families["cubic"].deriv.has_value());
    const Family F = resolve_family(cfg);
    EXPECT_DOUBLE_EQ(F(1.0, 0.5), 2.25);
    EXPECT_TRUE(F.analytic_derivative());
    cfg.validate();
}

TEST(Config, Errors) {
    RunConfig cfg;
    std::istringstream a("grid = 12by12\n");
    EXPECT_THROW(apply_config(cfg, a), ParseError);
    std::istringstream b("colour = red\n");
    EXPECT_THROW(apply_config(cfg, b), ParseError);
    std::istringstream c("family.x.expr\n");
    EXPECT_THROW(apply_config(cfg, c), ParseError);
    std::istringstream d("delta = 1e-6x\n");
    EXPECT_THROW(apply_config(cfg, d), ParseError);
    EXPECT_EQ(parse_n_range("3..7"), (std::pair<int, int>{3, 7}));
    EXPECT_THROW(parse_n_range("3..x"), ParseError);
    cfg = RunConfig{};
    cfg.family = "missing";
    EXPECT_THROW(resolve_family(cfg), std::invalid_argument);
    cfg.nMin = 3;
    cfg.nMax = 2;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Cli, Seq) {
    EXPECT_EQ(cli("seq nu RLLRLR").out, "RLRRLL\n");
    EXPECT_EQ(cli("seq mu R").out, "L\n");
    EXPECT_EQ(cli("seq mu RLLRLR").out, "RLL\n");
    EXPECT_EQ(cli("seq order RLL RLR").out, "Greater\n");
    EXPECT_EQ(cli("seq shuffle RL").out, "(1,0)\n");
    EXPECT_EQ(cli("seq enumerate 3").out, "RLL\nRLR\n");
    const auto m = cli("seq match 6");
    EXPECT_EQ(m.status, 0);
    EXPECT_NE(m.out.find("27 pairs"), std::string::npos);
    EXPECT_NE(m.out.find("RLRRRR RLRRRL"), std::string::npos);
    EXPECT_EQ(cli("seq nu RXL").status, 2);
    EXPECT_EQ(cli("seq bogus R").status, 2);
    EXPECT_EQ(cli("--help").status, 0);
    EXPECT_EQ(cli("verify --no-such-flag").status, 2);
}

TEST(Cli, VerifyUsageAndRun) {
    EXPECT_EQ(cli("verify --n 2").status, 2);
    const auto out = scratch("verify");
    const auto r = cli("verify --family quadratic-full --n 1..3 --out " + out.string());
    EXPECT_EQ(r.status, 0);
    const auto rep = json::parse(slurp(out / "report_n3.json"));
    EXPECT_EQ(rep["verdict"], "pass");
    EXPECT_EQ(rep["numericMatching"].size(), 3u);
    EXPECT_EQ(cli("verify --family quadratic --n 1").status, 1);
    const auto cfgRun = cli("verify --config " + fixture("families.cfg") + " --n 2 --out " + out.string());
    EXPECT_EQ(cfgRun.status, 0);
    EXPECT_EQ(cli("verify --family quadratic-full --n 5 --grid 16x16 --out " + out.string()).status, 1);
}

TEST(Cli, DiagramOutputs) {
    const auto out = scratch("diagram");
    const auto r = cli("diagram --family quadratic-full --n 2 --grid 64x64 --threads 2 --out " + out.string());
    ASSERT_EQ(r.status, 0);
    for (const char* f : {"field.csv", "zero_cells.txt", "components.json", "diagram.svg"})
        EXPECT_TRUE(fs::exists(out / f)) << f;
    const auto doc = diagram_from_json(json::parse(slurp(out / "components.json")));
    EXPECT_EQ(doc.m, 2);
    EXPECT_FALSE(doc.components.empty());
    EXPECT_NE(slurp(out / "diagram.svg").find("<svg"), std::string::npos);
    std::istringstream zc(slurp(out / "zero_cells.txt"));
    EXPECT_EQ(read_zero_cells(zc).nt, 64);

    const auto empty = scratch("empty");
    ASSERT_EQ(cli("diagram --family quadratic-full --n 1 --t-range 0:0.1 --grid 32x32 --out " + empty.string()).status, 0);
    EXPECT_TRUE(json::parse(slurp(empty / "components.json"))["components"].empty());
    EXPECT_EQ(cli("diagram --family quadratic-full --n 1..2 --out " + empty.string()).status, 2);
    EXPECT_EQ(cli("diagram --expr \"t - x^2\" --n 1 --out " + empty.string()).status, 2);
}

TEST(Cli, Path) {
    const auto out = scratch("path");
    EXPECT_EQ(cli("path " + fixture("bar.txt") + " --p0 6 --out " + out.string()).status, 0);
    const auto j = json::parse(slurp(out / "path.json"));
    EXPECT_EQ(j["first"], json::array({5, 19}));
    EXPECT_NE(slurp(out / "overlay.txt").find('*'), std::string::npos);
    EXPECT_EQ(cli("path " + fixture("train.txt") + " --p0 20 --mode doubled --out " + out.string()).status, 0);
    EXPECT_EQ(cli("path " + fixture("blocking.txt") + " --p0 8 --out " + out.string()).status, 3);
    EXPECT_EQ(cli("path " + fixture("spoke_blobs.txt") + " --chord --component 3 --out " + out.string()).status, 0);
    EXPECT_EQ(cli("path " + fixture("bar.txt") + " --out " + out.string()).status, 2);
}
