#include "torsionlab/config.hpp"

#include <fstream>

#include "torsionlab/errors.hpp"

namespace torsionlab {

void Config::validate() const {
    if (precision_digits < 15) throw UsageError("precision_digits must be >= 15");
    if (cf_max_steps < 1) throw UsageError("cf_max_steps must be positive");
    if (coeff_bit_cap < 64) throw UsageError("coeff_bit_cap must be >= 64");
    if (jobs < 0) throw UsageError("jobs must be >= 0");
}

Config load_config_file(const std::string &path, Config base) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
            if (blank) continue;
            throw UsageError("config line " + std::to_string(lineno) + " is not key = value");
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "precision_digits") base.precision_digits = std::stol(val);
        else if (key == "cf_max_steps") base.cf_max_steps = std::stoi(val);
        else if (key == "coeff_bit_cap") base.coeff_bit_cap = std::stoull(val);
        else if (key == "cache_dir") base.cache_dir = val;
        else if (key == "seed") base.seed = std::stoul(val, nullptr, 0);
        else if (key == "jobs") base.jobs = std::stoi(val);
        else throw UsageError("unknown config key: " + key);
    }
    base.validate();
    return base;
}

nlohmann::json config_json(const Config &cfg) {
    return {{"precision_digits", cfg.precision_digits},
            {"cf_max_steps", cfg.cf_max_steps},
            {"coeff_bit_cap", cfg.coeff_bit_cap},
            {"cache_dir", cfg.cache_dir},
            {"seed", cfg.seed},
            {"jobs", cfg.jobs}};
}

} // namespace torsionlab
