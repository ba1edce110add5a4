// End-to-end checks of the command-line tool. Invoked with the binary path
// as argv[1]; everything runs inside a scratch directory under the CWD.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define EXPECT(cond)                                                              \
    do {                                                                          \
        if (!(cond)) {                                                            \
            ++g_failures;                                                         \
            std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << ": " << #cond  \
                      << "\n";                                                    \
        }                                                                         \
    } while (0)

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t line_count(const std::string& s) {
    size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path work = fs::current_path() / "cli_scratch";
    fs::remove_all(work);
    fs::create_directories(work);

    // --- dip on the standard preset: files, determinism, headline contrast ---
    const fs::path d1 = work / "dip1";
    const fs::path d2 = work / "dip2";
    fs::create_directories(d1);
    fs::create_directories(d2);
    EXPECT(run(cli + " dip --set preset=S1 --out " + d1.string()) == 0);
    EXPECT(run(cli + " dip --set preset=S1 --out " + d2.string()) == 0);
    EXPECT(fs::exists(d1 / "profile.csv"));
    EXPECT(fs::exists(d1 / "metrics.json"));
    EXPECT(fs::exists(d1 / "run_meta.json"));
    const std::string prof = slurp(d1 / "profile.csv");
    EXPECT(prof.rfind("tau_fs,probability,normalized_probability\n", 0) == 0);
    EXPECT(prof == slurp(d2 / "profile.csv")); // byte-identical reruns
    EXPECT(line_count(prof) == 302);           // header + 301 delay samples

    const auto metrics = nlohmann::json::parse(slurp(d1 / "metrics.json"));
    const double vis = metrics.at("visibility").get<double>();
    EXPECT(vis > 0.80 && vis < 0.85);
    const auto meta = nlohmann::json::parse(slurp(d1 / "run_meta.json"));
    EXPECT(meta.at("converged").get<bool>());
    EXPECT(meta.at("config").at("label").get<std::string>() == "S1");
    EXPECT(!meta.at("config_hash").get<std::string>().empty());

    // --- --tau and --set overrides shape the delay grid and the dip ---
    const fs::path d3 = work / "dip3";
    fs::create_directories(d3);
    EXPECT(run(cli + " dip --set preset=S1 --set beta2_tot_fs2=35200 --tau -500:500:10 --out " +
               d3.string()) == 0);
    const std::string prof3 = slurp(d3 / "profile.csv");
    EXPECT(line_count(prof3) == 102);
    const auto m3 = nlohmann::json::parse(slurp(d3 / "metrics.json"));
    EXPECT(m3.at("fwhm_fs").get<double>() >
           2.0 * metrics.at("fwhm_fs").get<double>()); // chirp broadens the dip

    // --- sweep: three rows, contrast decreasing along beta2 ---
    const fs::path sw = work / "sweep";
    fs::create_directories(sw);
    EXPECT(run(cli + " sweep --set preset=S1 --axis beta2 --values 0,17600,35200 --out " +
               sw.string()) == 0);
    const std::string sweep = slurp(sw / "sweep.csv");
    EXPECT(sweep.rfind("value,visibility,fwhm_fs\n", 0) == 0);
    EXPECT(line_count(sweep) == 4);
    std::vector<double> vis_col, fwhm_col;
    {
        std::stringstream ss(sweep);
        std::string line;
        std::getline(ss, line); // header
        while (std::getline(ss, line)) {
            double v0, v1, v2;
            EXPECT(std::sscanf(line.c_str(), "%lf,%lf,%lf", &v0, &v1, &v2) == 3);
            vis_col.push_back(v1);
            fwhm_col.push_back(v2);
        }
    }
    EXPECT(vis_col.size() == 3);
    EXPECT(vis_col[0] > vis_col[1] && vis_col[1] > vis_col[2]);
    EXPECT(fwhm_col[0] < fwhm_col[1] && fwhm_col[1] < fwhm_col[2]);

    // --- spectrum: ascending wavelengths, slit narrows the support ---
    const fs::path sp = work / "spec";
    fs::create_directories(sp);
    EXPECT(run(cli + " spectrum gaussian 811 20 --points 101 --out " + sp.string()) == 0);
    const std::string spec = slurp(sp / "spectrum.csv");
    EXPECT(spec.rfind("wavelength_nm,intensity\n", 0) == 0);
    EXPECT(line_count(spec) == 102);
    {
        std::stringstream ss(spec);
        std::string line;
        std::getline(ss, line);
        double prev = -1.0;
        while (std::getline(ss, line)) {
            double wl, in;
            EXPECT(std::sscanf(line.c_str(), "%lf,%lf", &wl, &in) == 2);
            EXPECT(wl > prev);
            EXPECT(in >= 0.0);
            prev = wl;
        }
    }

    // --- fit: round trip through generated data, then malformed input ---
    const fs::path ft = work / "fit";
    fs::create_directories(ft);
    EXPECT(run(cli + " dip --set preset=S1 --set beta2_tot_fs2=15000 --tau -300:300:15 --out " +
               ft.string()) == 0);
    EXPECT(run(cli + " fit --set preset=S1 --data " + (ft / "profile.csv").string() +
               " --free beta2 --out " + ft.string()) == 0);
    const auto fit = nlohmann::json::parse(slurp(ft / "fit.json"));
    EXPECT(std::abs(fit.at("beta2_fs2").get<double>() - 15000.0) < 300.0);
    EXPECT(fit.at("converged").get<bool>());

    {
        std::ofstream bad(work / "bad.csv");
        bad << "tau_fs,probability\n0,0.5\n10,oops\n";
    }
    const int rc_bad = run(cli + " fit --data " + (work / "bad.csv").string() + " --out " +
                           work.string() + " 2> " + (work / "stderr.txt").string());
    EXPECT(rc_bad != 0);
    const std::string err = slurp(work / "stderr.txt");
    EXPECT(err.find("error:") != std::string::npos);
    EXPECT(err.find("row") != std::string::npos);

    // --- unknown config keys are rejected loudly ---
    const int rc_key = run(cli + " dip --set pdc.fwm_nm=10 --out " + work.string() + " 2> " +
                           (work / "stderr2.txt").string());
    EXPECT(rc_key != 0);
    EXPECT(slurp(work / "stderr2.txt").find("unknown key") != std::string::npos);

    if (g_failures == 0) fs::remove_all(work);
    std::cout << (g_failures == 0 ? "cli tests passed\n"
                                  : "cli tests failed: " + std::to_string(g_failures) + "\n");
    return g_failures == 0 ? 0 : 1;
}
