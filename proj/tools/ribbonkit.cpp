// ribbonkit command-line interface.
//
// Exit codes: 0 success (or IMPOSSIBLE for certify), 1 INCONCLUSIVE,
// 2 usage, parse or validation error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ribbonkit/error.hpp"
#include "ribbonkit/feasibility.hpp"
#include "ribbonkit/io.hpp"
#include "ribbonkit/maxcorr.hpp"
#include "ribbonkit/multiagent.hpp"
#include "ribbonkit/ribbon.hpp"
#include "ribbonkit/sdpi.hpp"

using namespace ribbonkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInconclusive = 1;
constexpr int kExitError = 2;

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::ParseError, "write failed for " + path);
}

void emit(const Json& j) { std::cout << dump(j); }

struct Common {
    std::uint64_t seed = 0;
    std::optional<double> tol;
    int resolution = 0;

    double tol_or(double fallback) const { return tol.value_or(fallback); }

    SearchConfig config() const {
        SearchConfig cfg;
        cfg.seed = seed;
        cfg.tol = tol_or(1e-5);
        cfg.grid_resolution = resolution;
        return cfg;
    }
};

void add_common(CLI::App* cmd, Common& c, bool with_resolution) {
    cmd->add_option("--seed", c.seed, "random seed (default 0)");
    cmd->add_option("--tol", c.tol, "search tolerance")->check(CLI::PositiveNumber);
    if (with_resolution) cmd->add_option("--resolution", c.resolution, "grid points per axis")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Converse bounds for non-interactive simulation of finite distributions"};
    app.require_subcommand(1);

    Common common;
    std::string file, source_file, target_file, out_path;
    std::vector<double> p_list, eps_list;
    double p = 0.0, eps = 0.0, s = 0.0;
    std::vector<double> bracket;
    bool transpose = false;

    auto* rho = app.add_subcommand("rho-m", "maximal correlation of a pair");
    rho->add_option("file", file, "pair distribution file")->required();

    auto* certify = app.add_subcommand("certify", "impossibility certificate for simulating target from source");
    certify->add_option("source", source_file, "source pair file")->required();
    certify->add_option("target", target_file, "target pair file")->required();
    certify->add_option("--p-grid", p_list, "comma-separated exponents for the slope comparison")->delimiter(',');
    add_common(certify, common, false);

    auto* region = app.add_subcommand("region", "label the (c, d) grid of binary targets against DSBS(eps)");
    region->add_option("--eps", eps, "source crossover probability")->required();
    region->add_option("--s", s, "target Q(U=1)")->required();
    region->add_option("--p", p, "ribbon exponent")->required();
    region->add_option("--out", out_path, "CSV output path")->required();
    add_common(region, common, true);

    auto* holder3 = app.add_subcommand("holder3", "diagonal Hoelder contraction of a three-agent binary tensor");
    holder3->add_option("file", file, "tensor file")->required();
    auto* p_opt = holder3->add_option("--p", p, "test (p, p, p)");
    auto* b_opt = holder3->add_option("--bracket", bracket, "bisect the threshold between LO and HI")->expected(2);
    p_opt->excludes(b_opt);
    holder3->add_option("--out", out_path, "contour CSV path (with --p)");
    add_common(holder3, common, true);

    auto* sstar = app.add_subcommand("sstar", "strong data-processing constant s*(X;Y)");
    sstar->add_option("file", file, "pair distribution file")->required();
    sstar->add_flag("--transpose", transpose, "report s*(Y;X) instead");
    add_common(sstar, common, true);

    auto* ribbon = app.add_subcommand("ribbon", "ribbon boundary q*_p and slope s_p");
    ribbon->add_option("file", file, "pair distribution file")->required();
    ribbon->add_option("--p", p_list, "comma-separated exponents")->delimiter(',')->required();
    add_common(ribbon, common, false);

    auto* limits = app.add_subcommand("limits", "slopes near p = 1 and p = +-infinity against s*");
    limits->add_option("file", file, "pair distribution file")->required();
    limits->add_option("--eps", eps_list, "offsets from p = 1 (default 0.2,0.1,0.05)")->delimiter(',');
    limits->add_option("--p-grid", p_list, "large exponents (default 4,10,20,-4,-10,-20)")->delimiter(',');
    add_common(limits, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ribbonkit: " << e.what() << "\n";
        return kExitError;
    }

    try {
        const SearchConfig cfg = common.config();

        if (*rho) {
            emit(to_json(rho_m(as_pair(load_dist_file(file)))));
            return kExitOk;
        }

        if (*certify) {
            const JointDist src = as_pair(load_dist_file(source_file));
            const JointDist tgt = as_pair(load_dist_file(target_file));
            const Certificate mc = certify_maxcorr(src, tgt);
            const Certificate rb = mc.verdict == CertVerdict::Impossible
                                       ? Certificate{}
                                       : certify_ribbon(src, tgt, p_list.empty() ? default_p_grid() : p_list, cfg);
            const Certificate& decisive = mc.verdict == CertVerdict::Impossible ? mc : rb;
            Json j = to_json(decisive);
            Json checks = Json::array();
            checks.push_back(to_json(mc));
            if (mc.verdict != CertVerdict::Impossible) checks.push_back(to_json(rb));
            j["checks"] = checks;
            emit(j);
            return decisive.verdict == CertVerdict::Impossible ? kExitOk : kExitInconclusive;
        }

        if (*region) {
            const RegionGrid g = region_grid(eps, s, p, common.resolution > 0 ? common.resolution : 101, cfg);
            write_file(out_path, region_csv(g));
            Json j = summary_json(g);
            j["rows"] = g.labels.size();
            j["out"] = out_path;
            emit(j);
            return kExitOk;
        }

        if (*holder3) {
            const KJointDist kd = as_tensor(load_dist_file(file));
            if (kd.k() != 3 || kd.shape()[0] != 2 || kd.shape()[1] != 2 || kd.shape()[2] != 2)
                throw Error(ErrorCode::UnsupportedShape, "holder3 needs three binary agents");
            if (*b_opt) {
                if (!out_path.empty()) throw Error(ErrorCode::OutOfRange, "--out needs --p");
                emit(to_json(diag_threshold(kd, bracket[0], bracket[1], common.tol_or(1e-4), cfg)));
                return kExitOk;
            }
            if (!*p_opt) throw Error(ErrorCode::OutOfRange, "holder3 needs --p or --bracket");
            Json j = to_json(holder_diag_test(kd, p, cfg));
            if (!out_path.empty()) {
                const RatioContour c = ratio_contour(kd, p, common.resolution > 0 ? common.resolution : 201);
                write_file(out_path, contour_csv(c));
                j["contour"] = summary_json(c);
                j["contour"]["out"] = out_path;
            }
            emit(j);
            return kExitOk;
        }

        if (*sstar) {
            const JointDist d = as_pair(load_dist_file(file));
            emit(to_json(s_star(transpose ? d.transpose() : d, cfg)));
            return kExitOk;
        }

        if (*ribbon) {
            const JointDist d = as_pair(load_dist_file(file));
            Json rows = Json::array();
            for (double pv : p_list) {
                Json row;
                row["p"] = round12(pv);
                row["s_p"] = to_json(s_p(d, pv, common.tol_or(1e-5), cfg), "s");
                row["q_star"] = to_json(q_star(d, pv, common.tol_or(1e-5), cfg), "q");
                rows.push_back(row);
            }
            emit(rows);
            return kExitOk;
        }

        if (*limits) {
            const JointDist d = as_pair(load_dist_file(file));
            if (eps_list.empty()) eps_list = {0.2, 0.1, 0.05};
            if (p_list.empty()) p_list = {4.0, 10.0, 20.0, -4.0, -10.0, -20.0};
            Json j;
            j["p_to_1"] = to_json(check_limit_p_to_1(d, eps_list, cfg, common.tol_or(1e-5)));
            j["p_to_inf"] = to_json(check_limit_p_to_inf(d, p_list, cfg, common.tol_or(1e-5)));
            emit(j);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "ribbonkit: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
