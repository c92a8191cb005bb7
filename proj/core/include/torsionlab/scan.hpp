#ifndef TORSIONLAB_SCAN_HPP
#define TORSIONLAB_SCAN_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsionlab/config.hpp"

namespace torsionlab {

inline constexpr const char *k_schema_version = "1";
inline constexpr const char *k_code_version = "torsionlab 0.1.0";

// One experiment run: rows carry their own certificates (exact identity
// fields or tolerance-tagged numerics) so any row can be replayed.
struct ScanReport {
    std::string experiment_id;
    nlohmann::json parameters;
    std::vector<nlohmann::json> rows;
    nlohmann::json summary;
    nlohmann::json provenance;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// Pell <-> torsion correspondence on Q_lambda = x^4 + x + lambda: torsion
// parameters must be solvable, certified non-torsion controls must stay
// inconclusive within budget.
ScanReport pell_torsion_scan(int n_max, int cf_budget, const Config &cfg);

// Squared-linear-factor search for Y_n(rho) = 0 hits; case "i" is rho = 0
// (exact), case "ii" uses the half-point construction at high precision.
ScanReport theorem4_scan(const std::string &case_id, int n_max, int k_max,
                         const Config &cfg);

// Ribet n^2 law on the lemniscatic curve with alpha = 2i over all
// primitive torsion logarithms of order <= n_max.
ScanReport ribet_scan(int n_max, const Config &cfg);

// Lift statistics: family_id "lemniscatic" compares the Ribet section
// with an x-dependent perturbation on the same torsion set; "quartic"
// counts |S_m^E| against the cleaned condition degree and probes
// G-torsion lifts through Y_n(0).
ScanReport surface_count(const std::string &family_id, int m_max, const Config &cfg);

// Re-runs one serialized row and compares verdicts.
nlohmann::json replay_row(const nlohmann::json &row, const Config &cfg);

// Content-addressed result cache below cfg.cache_dir (no-op when unset).
std::string content_hash(const std::string &canonical);
void write_cache(const ScanReport &report, const Config &cfg);
std::optional<nlohmann::json> read_cache(const std::string &experiment_id,
                                         const nlohmann::json &parameters,
                                         const Config &cfg);

} // namespace torsionlab

#endif
