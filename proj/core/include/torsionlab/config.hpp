#ifndef TORSIONLAB_CONFIG_HPP
#define TORSIONLAB_CONFIG_HPP

#include <cstddef>
#include <string>

#include <json.hpp>

namespace torsionlab {

struct Config {
    long precision_digits = 50;
    int cf_max_steps = 512;
    std::size_t coeff_bit_cap = std::size_t(1) << 20;
    std::string cache_dir;
    unsigned long seed = 0x5EED;
    int jobs = 0; // 0 = logical cores

    void validate() const;
};

// Flat "key = value" configuration files; '#' starts a comment line.
Config load_config_file(const std::string &path, Config base = {});

nlohmann::json config_json(const Config &cfg);

} // namespace torsionlab

#endif
