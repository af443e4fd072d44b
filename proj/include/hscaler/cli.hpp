#pragma once

#include "hscaler/csim.hpp"
#include "hscaler/moments.hpp"
#include "hscaler/protocol.hpp"
#include "hscaler/qsim.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hscaler::cli {

// Parsed and validated run configuration. The initial state is given in the
// dimensionless code units (Q, P, sigma_Q); commands that work dimensionally
// convert through l = sqrt(hbar t_f / m).
struct RunConfig {
    ScalingSpec spec;
    GridSpec grid;

    bool initial_is_gaussian = true;
    double init_q_mean = 1.0;
    double init_p_mean = 1.0;
    double init_sigma_q = M_SQRT1_2;
    MomentState init_moments; // dimensionless, time 0

    std::int64_t ensemble_n = 100000;
    std::uint64_t ensemble_seed = 1;

    std::string out_dir = ".";
    int snapshots = 12;
    int wigner_points = 128;

    std::optional<std::vector<double>> sweep_t_f;
    std::optional<std::vector<double>> sweep_scale_factors;

    nlohmann::json canonical; // normalized config document (hashed into metadata)

    double length_unit() const { return std::sqrt(spec.hbar * spec.t_f / spec.mass); }
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir; // overrides config when nonempty
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

RunConfig parse_config(const nlohmann::json& doc); // throws ConfigError
RunConfig load_config(const CommonOptions& opt);

int cmd_design(const RunConfig& cfg, const CommonOptions& opt);
int cmd_validate(const RunConfig& cfg, const CommonOptions& opt);
int cmd_moments(const RunConfig& cfg, const CommonOptions& opt);
int cmd_qsim(const RunConfig& cfg, const CommonOptions& opt);
int cmd_wigner(const RunConfig& cfg, const CommonOptions& opt);
int cmd_csim(const RunConfig& cfg, const CommonOptions& opt);
int cmd_sweep(const RunConfig& cfg, const CommonOptions& opt);

// Load the config, run one subcommand, and translate exceptions into exit
// codes: 0 success, 1 usage/config, 2 physics validation, 3 numerical.
int dispatch(const std::string& command, const CommonOptions& opt);

} // namespace hscaler::cli
