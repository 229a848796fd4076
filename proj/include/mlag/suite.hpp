#pragma once
// Batch verification: suite configs (explicit or generator-expanded
// entries), typed parameter blocks, concurrent evaluation and
// machine-readable JSON/CSV reports.

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mlag/identities.hpp"

namespace mlag {

using json = nlohmann::json;

// ------------------------------------------------------------ param helpers

cplx param_cplx(const json& params, const std::string& key);
cplx param_cplx_or(const json& params, const std::string& key, cplx fallback);
double param_real(const json& params, const std::string& key);
int param_int(const json& params, const std::string& key);
CPoint param_cpoint(const json& params, const std::string& key);
MultiIndex param_multiindex(const json& params, const std::string& key);
std::vector<cplx> param_cplx_list(const json& params, const std::string& key);
std::vector<CPoint> param_cpoint_list(const json& params,
                                      const std::string& key);

json cplx_to_json(cplx z);
json cpoint_to_json(const CPoint& x);

// --------------------------------------------------------------- dispatch

struct EvalOptions {
  SeriesControl ctl{120, 1e-12, 3};
  QuadOpts quad{};
  int per_axis = 96;
  std::uint64_t index_budget = 2'000'000;
};

// Evaluate one scalar function by name ("laguerre_uni", "phi1", ...).
cplx eval_function(const std::string& name, const json& params,
                   const EvalOptions& opts);

// Evaluate one identity by id ("alsalam_gf", "hardy_hille", ...).
IdentityReport run_identity(const std::string& id, const json& params,
                            const EvalOptions& opts);

// True when the entry lies outside the certified quadrature regime and the
// suite should mark it skipped rather than run it.
bool identity_out_of_regime(const std::string& id, const json& params,
                            const EvalOptions& opts);

// Type-checks a parameter block against the identity's signature without
// evaluating anything; DomainError on missing or badly-typed parameters.
void validate_identity_params(const std::string& id, const json& params);

const std::vector<std::string>& known_identities();
const std::vector<std::string>& known_functions();

// ---------------------------------------------------------------- sampling

// Named admissible-parameter generators, shared by the default suite and
// the acceptance tests.  Each returns `count` parameter blocks drawn from
// rng; spec carries generator-specific knobs (k, L, alpha, ...).
std::vector<json> generate_params(const std::string& generator,
                                  std::mt19937_64& rng, const json& spec,
                                  int count);

// ------------------------------------------------------------------ suite

struct SuiteEntry {
  std::string identity_id;
  json params;
  EvalOptions opts;
  double expected_max_rel_residual = 1e-8;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::uint64_t budget = 2'000'000;
  std::vector<SuiteEntry> entries;  // post-expansion, in config order
};

struct SuiteRecord {
  std::string identity_id;
  json params;
  IdentityReport report;
  std::string status;  // pass | fail | skip | error
};

struct SuiteResult {
  std::vector<SuiteRecord> records;
  int passed = 0, failed = 0, skipped = 0;
  std::string summary() const;
  bool ok() const { return failed == 0; }
};

// Parses a config (throws DomainError with a diagnostic on malformed input)
// and expands generator entries deterministically from the seed.
SuiteConfig parse_suite_config(const json& doc);

SuiteResult run_suite(const SuiteConfig& config, int jobs = 1);

json suite_report_json(const SuiteResult& result);
std::string suite_report_csv(const SuiteResult& result);

}  // namespace mlag
