#include "mlag/suite.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace mlag {

// ------------------------------------------------------------ param helpers

namespace {

cplx json_to_cplx(const json& v, const std::string& key) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_object() && v.contains("re"))
    return cplx(v["re"].get<double>(),
                v.contains("im") ? v["im"].get<double>() : 0.0);
  throw DomainError("parameter '" + key + "' must be a number or {re, im}");
}

const json& require(const json& params, const std::string& key) {
  if (!params.is_object() || !params.contains(key))
    throw DomainError("missing parameter '" + key + "'");
  return params.at(key);
}

}  // namespace

cplx param_cplx(const json& params, const std::string& key) {
  return json_to_cplx(require(params, key), key);
}

cplx param_cplx_or(const json& params, const std::string& key, cplx fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  return json_to_cplx(params.at(key), key);
}

double param_real(const json& params, const std::string& key) {
  cplx z = param_cplx(params, key);
  if (z.imag() != 0.0)
    throw DomainError("parameter '" + key + "' must be real");
  return z.real();
}

int param_int(const json& params, const std::string& key) {
  double r = param_real(params, key);
  if (r != std::floor(r))
    throw DomainError("parameter '" + key + "' must be an integer");
  return static_cast<int>(r);
}

CPoint param_cpoint(const json& params, const std::string& key) {
  const json& v = require(params, key);
  if (v.is_array()) {
    std::vector<cplx> e;
    for (const auto& item : v) e.push_back(json_to_cplx(item, key));
    return CPoint(std::move(e));
  }
  return CPoint{json_to_cplx(v, key)};
}

MultiIndex param_multiindex(const json& params, const std::string& key) {
  const json& v = require(params, key);
  std::vector<int> e;
  if (v.is_array())
    for (const auto& item : v) e.push_back(item.get<int>());
  else
    e.push_back(v.get<int>());
  return MultiIndex(std::move(e));
}

std::vector<cplx> param_cplx_list(const json& params, const std::string& key) {
  const json& v = require(params, key);
  std::vector<cplx> out;
  if (v.is_array())
    for (const auto& item : v) out.push_back(json_to_cplx(item, key));
  else
    out.push_back(json_to_cplx(v, key));
  return out;
}

std::vector<CPoint> param_cpoint_list(const json& params,
                                      const std::string& key) {
  const json& v = require(params, key);
  if (!v.is_array() || v.empty())
    throw DomainError("parameter '" + key + "' must be a nonempty array");
  std::vector<CPoint> out;
  if (!v[0].is_array()) {
    // single point given flat
    out.push_back(param_cpoint(params, key));
    return out;
  }
  for (const auto& item : v) {
    std::vector<cplx> e;
    for (const auto& c : item) e.push_back(json_to_cplx(c, key));
    out.push_back(CPoint(std::move(e)));
  }
  return out;
}

json cplx_to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json cpoint_to_json(const CPoint& x) {
  json a = json::array();
  for (int i = 0; i < x.dim(); ++i) a.push_back(cplx_to_json(x[i]));
  return a;
}

// --------------------------------------------------------------- dispatch

const std::vector<std::string>& known_functions() {
  static const std::vector<std::string> names{
      "laguerre_uni", "laguerre_multi", "laguerre_neg_shift",
      "multiple_laguerre_2nd", "phi1", "phi2k", "le_roy", "bessel_i_reg",
      "hyp1f1", "hyp2f1", "hyp1f2"};
  return names;
}

const std::vector<std::string>& known_identities() {
  static const std::vector<std::string> names{
      "alsalam_gf",     "exponential_gf", "phi1_expansion",
      "multiple_expansion", "tremblay_gf", "addition_theorem",
      "kummer_gf",      "kummer_split",   "hardy_hille",
      "product_formula", "diagonal_gf",   "diagonal_binomial_sign"};
  return names;
}

cplx eval_function(const std::string& name, const json& params,
                   const EvalOptions& opts) {
  const SeriesControl& ctl = opts.ctl;
  if (name == "laguerre_uni")
    return laguerre_uni(param_int(params, "n"), param_cplx(params, "alpha"),
                        param_cplx(params, "x"));
  if (name == "laguerre_multi")
    return laguerre_multi(param_multiindex(params, "n"),
                          param_cplx(params, "alpha"),
                          param_cpoint(params, "x"));
  if (name == "laguerre_neg_shift")
    return laguerre_neg_shift(param_multiindex(params, "n"),
                              param_cplx(params, "beta"),
                              param_cpoint(params, "x"));
  if (name == "multiple_laguerre_2nd")
    return multiple_laguerre_2nd(param_multiindex(params, "n"),
                                 param_cplx(params, "alpha"),
                                 param_cpoint(params, "beta"),
                                 param_cplx(params, "x"));
  if (name == "phi1")
    return humbert_phi1_series({param_cplx(params, "a"),
                                param_cplx(params, "b"),
                                param_cplx(params, "c")},
                               param_cplx(params, "x"), param_cplx(params, "y"),
                               ctl);
  if (name == "phi2k")
    return lauricella_phi2k(param_cpoint(params, "b"), param_cplx(params, "c"),
                            param_cpoint(params, "x"), ctl);
  if (name == "le_roy")
    return le_roy(param_cplx(params, "gamma"), param_cplx(params, "z"), ctl);
  if (name == "bessel_i_reg")
    return bessel_i_reg(param_cplx(params, "alpha"), param_cplx(params, "t"),
                        ctl);
  if (name == "hyp1f1")
    return hyp1f1(param_cplx(params, "a"), param_cplx(params, "c"),
                  param_cplx(params, "z"), ctl);
  if (name == "hyp2f1")
    return hyp2f1(param_cplx(params, "a"), param_cplx(params, "b"),
                  param_cplx(params, "c"), param_cplx(params, "z"), ctl);
  if (name == "hyp1f2")
    return hyp1f2(param_cplx(params, "a"), param_cplx(params, "b1"),
                  param_cplx(params, "b2"), param_cplx(params, "z"), ctl);
  throw DomainError("unknown function '" + name + "'");
}

IdentityReport run_identity(const std::string& id, const json& params,
                            const EvalOptions& opts) {
  const SeriesControl& ctl = opts.ctl;
  if (id == "alsalam_gf")
    return alsalam_gf(param_cplx(params, "alpha"), param_cplx(params, "beta"),
                      param_cplx(params, "gamma"), param_cpoint(params, "u"),
                      param_cpoint(params, "x"), ctl);
  if (id == "exponential_gf")
    return exponential_gf(param_cplx(params, "beta"), param_cpoint(params, "u"),
                          param_cpoint(params, "x"), ctl);
  if (id == "phi1_expansion")
    return phi1_expansion(param_cplx(params, "alpha"),
                          param_cplx(params, "beta"),
                          param_cplx(params, "beta1"),
                          param_cplx(params, "gamma"),
                          param_cpoint(params, "sigma"),
                          param_cpoint(params, "x"), param_cpoint(params, "y"),
                          ctl);
  if (id == "multiple_expansion")
    return multiple_expansion(param_cplx(params, "alpha"),
                              param_cplx(params, "gamma"),
                              param_cplx_list(params, "betas"),
                              param_cpoint_list(params, "sigmas"),
                              param_cpoint(params, "x"),
                              param_cpoint(params, "y"), ctl,
                              opts.index_budget);
  if (id == "tremblay_gf")
    return tremblay_gf(param_cplx(params, "alpha"),
                       param_cplx(params, "gamma"),
                       param_cplx_list(params, "betas"),
                       param_cpoint_list(params, "w"),
                       param_cpoint(params, "u"), ctl, opts.index_budget);
  if (id == "addition_theorem")
    return addition_theorem(param_int(params, "m"),
                            param_cplx_list(params, "a"),
                            param_cpoint(params, "u"),
                            param_cpoint_list(params, "w"));
  if (id == "kummer_gf")
    return kummer_gf(param_cplx(params, "alpha"),
                     param_cplx_list(params, "betas"),
                     param_cpoint_list(params, "w"), param_cpoint(params, "u"),
                     ctl, opts.quad);
  if (id == "kummer_split")
    return kummer_split(param_cplx(params, "alpha"),
                        param_cplx_list(params, "betas"),
                        param_cpoint_list(params, "w"),
                        param_cpoint(params, "u"), ctl);
  if (id == "hardy_hille")
    return hardy_hille(param_cplx(params, "alpha"), param_cpoint(params, "x"),
                       param_cpoint(params, "y"), param_cpoint(params, "u"),
                       ctl);
  if (id == "product_formula") {
    MultiIndex m = param_multiindex(params, "m");
    MultiIndex n = param_multiindex(params, "n");
    int per_axis = opts.per_axis;
    if (params.contains("per_axis")) per_axis = param_int(params, "per_axis");
    QuadRule box = box_rule(m.dim() + 1, per_axis);
    return product_formula(m, n, param_real(params, "alpha"),
                           param_real(params, "beta"),
                           param_cpoint(params, "x"), param_cpoint(params, "y"),
                           box);
  }
  if (id == "diagonal_gf") {
    CPoint x = params.contains("x")
                   ? param_cpoint(params, "x")
                   : CPoint::zeros(param_int(params, "k"));
    if (params.contains("k") &&
        param_int(params, "k") != x.dim())
      throw DomainError("diagonal_gf: k does not match the dimension of x");
    cplx beta = param_cplx_or(params, "beta", cplx(1.0));
    return diagonal_gf(beta, x, param_cplx(params, "u"), ctl, opts.quad);
  }
  if (id == "diagonal_binomial_sign") {
    double u = params.contains("u") ? param_real(params, "u") : 0.05;
    auto finding = diagonal_binomial_sign(u);
    return finding.report;
  }
  throw DomainError("unknown identity '" + id + "'");
}

void validate_identity_params(const std::string& id, const json& params) {
  // type-checks the parameter block against the identity's signature;
  // mirrors the extraction lists in run_identity without evaluating
  if (id == "alsalam_gf") {
    param_cplx(params, "alpha");
    param_cplx(params, "beta");
    param_cplx(params, "gamma");
    param_cpoint(params, "u");
    param_cpoint(params, "x");
  } else if (id == "exponential_gf") {
    param_cplx(params, "beta");
    param_cpoint(params, "u");
    param_cpoint(params, "x");
  } else if (id == "phi1_expansion") {
    param_cplx(params, "alpha");
    param_cplx(params, "beta");
    param_cplx(params, "beta1");
    param_cplx(params, "gamma");
    param_cpoint(params, "sigma");
    param_cpoint(params, "x");
    param_cpoint(params, "y");
  } else if (id == "multiple_expansion") {
    param_cplx(params, "alpha");
    param_cplx(params, "gamma");
    param_cplx_list(params, "betas");
    param_cpoint_list(params, "sigmas");
    param_cpoint(params, "x");
    param_cpoint(params, "y");
  } else if (id == "tremblay_gf") {
    param_cplx(params, "alpha");
    param_cplx(params, "gamma");
    param_cplx_list(params, "betas");
    param_cpoint_list(params, "w");
    param_cpoint(params, "u");
  } else if (id == "addition_theorem") {
    param_int(params, "m");
    param_cplx_list(params, "a");
    param_cpoint(params, "u");
    param_cpoint_list(params, "w");
  } else if (id == "kummer_gf" || id == "kummer_split") {
    param_cplx(params, "alpha");
    param_cplx_list(params, "betas");
    param_cpoint_list(params, "w");
    param_cpoint(params, "u");
  } else if (id == "hardy_hille") {
    param_cplx(params, "alpha");
    param_cpoint(params, "x");
    param_cpoint(params, "y");
    param_cpoint(params, "u");
  } else if (id == "product_formula") {
    param_multiindex(params, "m");
    param_multiindex(params, "n");
    param_real(params, "alpha");
    param_real(params, "beta");
    param_cpoint(params, "x");
    param_cpoint(params, "y");
    if (params.contains("per_axis")) param_int(params, "per_axis");
  } else if (id == "diagonal_gf") {
    if (params.contains("x"))
      param_cpoint(params, "x");
    else
      param_int(params, "k");
    param_cplx(params, "u");
    param_cplx_or(params, "beta", cplx(1.0));
  } else if (id == "diagonal_binomial_sign") {
    if (params.contains("u")) param_real(params, "u");
  } else {
    throw DomainError("unknown identity '" + id + "'");
  }
}

bool identity_out_of_regime(const std::string& id, const json& params,
                            const EvalOptions& opts) {
  if (id != "product_formula") return false;
  MultiIndex m = param_multiindex(params, "m");
  MultiIndex n = param_multiindex(params, "n");
  int per_axis = opts.per_axis;
  if (params.contains("per_axis")) per_axis = param_int(params, "per_axis");
  cplx a = param_cplx(params, "alpha");
  cplx b = param_cplx(params, "beta");
  if (a.imag() != 0.0 || b.imag() != 0.0) return true;  // desk-scale exclusion
  return !product_formula_in_regime(m, n, m.dim(), per_axis);
}

// ---------------------------------------------------------------- sampling

namespace {

double u01(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

json jc(double re, double im = 0.0) {
  return json{{"re", re}, {"im", im}};
}

json simplex(std::mt19937_64& rng, int k, double total) {
  std::vector<double> d(static_cast<size_t>(k));
  double s = 0.0;
  for (auto& e : d) {
    e = u01(rng, 0.25, 1.0);
    s += e;
  }
  json a = json::array();
  for (double e : d) a.push_back(jc(total * e / s));
  return a;
}

json real_vec(std::mt19937_64& rng, int k, double lo, double hi) {
  json a = json::array();
  for (int i = 0; i < k; ++i) a.push_back(jc(u01(rng, lo, hi)));
  return a;
}

json cplx_vec(std::mt19937_64& rng, int k, double lo, double hi,
              double im_scale) {
  json a = json::array();
  for (int i = 0; i < k; ++i)
    a.push_back(jc(u01(rng, lo, hi), im_scale * u01(rng, -1.0, 1.0)));
  return a;
}

// |x|_1-bounded vector with nonzero entries and random signs
json small_nonzero_vec(std::mt19937_64& rng, int k, double total) {
  std::vector<double> d(static_cast<size_t>(k));
  double s = 0.0;
  for (auto& e : d) {
    e = u01(rng, 0.3, 1.0);
    s += e;
  }
  json a = json::array();
  for (double e : d) {
    double sign = (u01(rng, 0.0, 1.0) < 0.5) ? -1.0 : 1.0;
    a.push_back(jc(sign * total * e / s));
  }
  return a;
}

int spec_int(const json& spec, const std::string& key, int fallback) {
  return spec.contains(key) ? spec.at(key).get<int>() : fallback;
}

}  // namespace

std::vector<json> generate_params(const std::string& generator,
                                  std::mt19937_64& rng, const json& spec,
                                  int count) {
  std::vector<json> out;
  out.reserve(static_cast<size_t>(count));
  const int k = spec_int(spec, "k", 1);
  const int L = spec_int(spec, "L", 1);
  for (int i = 0; i < count; ++i) {
    json p;
    if (generator == "alsalam_gf_random") {
      p["alpha"] = jc(u01(rng, 0.3, 2.0));
      p["gamma"] = jc(u01(rng, 0.3, 2.0) + u01(rng, 0.3, 1.5));
      p["beta"] = jc(u01(rng, 0.1, 2.3) + 0.0137);
      p["u"] = simplex(rng, k, u01(rng, 0.1, 0.45));
      p["x"] = cplx_vec(rng, k, -1.5, 1.5, 0.0);
    } else if (generator == "exponential_gf_random") {
      p["beta"] = jc(u01(rng, 0.2, 3.0) + 0.0137);
      p["u"] = simplex(rng, k, u01(rng, 0.1, 0.42));
      p["x"] = cplx_vec(rng, k, -2.0, 2.0, 0.0);
    } else if (generator == "phi1_expansion_random") {
      p["alpha"] = jc(u01(rng, 0.3, 1.8));
      double beta = u01(rng, 0.2, 1.4) + 0.0137;
      p["beta"] = jc(beta);
      p["beta1"] = jc(beta + u01(rng, 0.2, 1.2));
      p["gamma"] = jc(u01(rng, 1.5, 3.0));
      p["sigma"] = real_vec(rng, k, 0.2, 0.9);
      p["x"] = small_nonzero_vec(rng, k, u01(rng, 0.2, 0.5));
      p["y"] = cplx_vec(rng, k, -0.8, 0.8, 0.0);
    } else if (generator == "multiple_expansion_random") {
      p["alpha"] = jc(u01(rng, 0.3, 1.8));
      p["gamma"] = jc(u01(rng, 1.5, 3.0));
      json betas = json::array();
      double b = u01(rng, 0.2, 1.2) + 0.0137;
      betas.push_back(jc(b));
      for (int r = 0; r < L; ++r) {
        b += u01(rng, 0.2, 1.0);
        betas.push_back(jc(b));
      }
      p["betas"] = betas;
      json sigmas = json::array();
      for (int r = 0; r < L; ++r) sigmas.push_back(real_vec(rng, k, 0.2, 0.9));
      p["sigmas"] = sigmas;
      p["x"] = small_nonzero_vec(rng, k, u01(rng, 0.2, 0.45));
      p["y"] = cplx_vec(rng, k, -0.7, 0.7, 0.0);
    } else if (generator == "tremblay_gf_random") {
      p["alpha"] = jc(u01(rng, 0.3, 1.8));
      p["gamma"] = jc(u01(rng, 1.5, 3.0));
      json betas = json::array();
      double b = u01(rng, 0.2, 1.2) + 0.0137;
      betas.push_back(jc(b));
      for (int r = 0; r < L; ++r) {
        b += u01(rng, 0.2, 1.0);
        betas.push_back(jc(b));
      }
      p["betas"] = betas;
      json w = json::array();
      for (int r = 0; r <= L; ++r) w.push_back(real_vec(rng, k, 0.1, 0.9));
      p["w"] = w;
      p["u"] = simplex(rng, k, u01(rng, 0.1, 0.4));
    } else if (generator == "addition_theorem_random") {
      p["m"] = spec.contains("m") ? spec.at("m").get<int>()
                                  : static_cast<int>(u01(rng, 0.0, 6.99));
      json a = json::array();
      for (int r = 0; r <= L; ++r)
        a.push_back(jc(u01(rng, 0.3, 2.0), u01(rng, -0.5, 0.5)));
      p["a"] = a;
      json w = json::array();
      for (int r = 0; r <= L; ++r)
        w.push_back(cplx_vec(rng, k, -1.2, 1.2, 0.5));
      p["w"] = w;
      // complex u on the <u> = -1 hyperplane
      json u = json::array();
      cplx rest = 0.0;
      for (int i = 0; i + 1 < k; ++i) {
        cplx ui(u01(rng, -0.5, 0.5), u01(rng, -0.5, 0.5));
        rest += ui;
        u.push_back(cplx_to_json(ui));
      }
      u.push_back(cplx_to_json(cplx(-1.0) - rest));
      p["u"] = u;
    } else if (generator == "kummer_gf_random" ||
               generator == "kummer_split_random") {
      bool split = (generator == "kummer_split_random");
      p["alpha"] = jc(u01(rng, 0.8, 2.0));
      double b0 = u01(rng, -1.4, -0.9);
      json betas = json::array();
      betas.push_back(jc(b0));
      if (split) {
        double b = b0;
        for (int r = 0; r + 1 < L; ++r) {
          b = b0 + u01(rng, 0.15, 0.45);
          betas.push_back(jc(b));
        }
        betas.push_back(jc(b0));
      } else {
        double b = b0;
        for (int r = 0; r < L; ++r) {
          b += u01(rng, 0.15, 0.4);
          betas.push_back(jc(b));
        }
      }
      p["betas"] = betas;
      json w = json::array();
      for (int r = 0; r < L; ++r) w.push_back(cplx_vec(rng, k, -0.8, 0.8, 0.0));
      p["w"] = w;
      if (k == 1) {
        p["u"] = json::array({jc(1.0)});
      } else {
        // interior of the <u> = 1 simplex
        std::vector<double> d(static_cast<size_t>(k));
        double s = 0.0;
        for (auto& e : d) {
          e = u01(rng, 0.6, 1.0);
          s += e;
        }
        json u = json::array();
        for (double e : d) u.push_back(jc(e / s));
        p["u"] = u;
      }
    } else if (generator == "hardy_hille_random") {
      p["alpha"] = spec.contains("alpha") ? jc(spec.at("alpha").get<double>())
                                          : jc(u01(rng, -0.6, 2.0));
      p["x"] = real_vec(rng, k, 0.0, 2.5);
      p["y"] = real_vec(rng, k, 0.0, 2.5);
      p["u"] = simplex(rng, k, u01(rng, 0.1, 0.4));
    } else if (generator == "product_formula_random") {
      int budget = spec_int(spec, "max_mn", k == 1 ? 4 : 3);
      // random split of a random total <= budget between m and n
      int total = static_cast<int>(u01(rng, 0.0, budget + 0.99));
      std::vector<int> mv(static_cast<size_t>(k), 0), nv(static_cast<size_t>(k), 0);
      for (int t = 0; t < total; ++t) {
        int which = static_cast<int>(u01(rng, 0.0, 1.99));
        int slot = static_cast<int>(u01(rng, 0.0, k - 0.01));
        (which ? nv : mv)[static_cast<size_t>(slot)] += 1;
      }
      p["m"] = mv;
      p["n"] = nv;
      double alpha = u01(rng, -0.4, 2.0);
      double beta = u01(rng, std::max(-0.4, -0.5 - alpha), 2.0);
      p["alpha"] = jc(alpha);
      p["beta"] = jc(beta);
      p["x"] = real_vec(rng, k, 0.1, 1.2);
      p["y"] = real_vec(rng, k, 0.1, 1.2);
    } else if (generator == "diagonal_gf_random") {
      const double betas[3] = {0.7, 1.5, 3.0};
      const double us[3] = {0.05, 0.1, 0.2};
      p["beta"] = jc(betas[i % 3]);
      p["u"] = jc(us[(i / 3) % 3]);
      p["x"] = real_vec(rng, k, 0.0, 2.0);
      p["k"] = k;
    } else {
      throw DomainError("unknown generator '" + generator + "'");
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ------------------------------------------------------------------ suite

namespace {

EvalOptions parse_opts(const json& entry, const EvalOptions& base) {
  EvalOptions opts = base;
  if (entry.contains("control")) {
    const json& c = entry.at("control");
    int n = c.contains("max_order") ? c.at("max_order").get<int>()
                                    : opts.ctl.max_total_order;
    double tol = c.contains("rel_tol") ? c.at("rel_tol").get<double>()
                                       : opts.ctl.rel_tol;
    int win = c.contains("tail_window") ? c.at("tail_window").get<int>()
                                        : opts.ctl.tail_window;
    opts.ctl = SeriesControl(n, tol, win);
  }
  if (entry.contains("quad")) {
    const json& q = entry.at("quad");
    if (q.contains("beta_nodes")) opts.quad.beta_nodes = q.at("beta_nodes").get<int>();
    if (q.contains("semi_nodes")) opts.quad.semi_nodes = q.at("semi_nodes").get<int>();
    if (q.contains("per_axis")) opts.per_axis = q.at("per_axis").get<int>();
  }
  return opts;
}

}  // namespace

SuiteConfig parse_suite_config(const json& doc) {
  if (!doc.is_object()) throw DomainError("suite config must be a JSON object");
  SuiteConfig cfg;
  cfg.seed = doc.contains("seed") ? doc.at("seed").get<std::uint64_t>() : 0;
  cfg.budget =
      doc.contains("budget") ? doc.at("budget").get<std::uint64_t>() : 2'000'000;
  if (!doc.contains("entries") || !doc.at("entries").is_array())
    throw DomainError("suite config needs an 'entries' array");
  std::mt19937_64 rng(cfg.seed);
  EvalOptions base;
  base.index_budget = cfg.budget;
  for (const auto& entry : doc.at("entries")) {
    if (!entry.is_object())
      throw DomainError("suite entry must be a JSON object");
    EvalOptions opts = parse_opts(entry, base);
    double expected = entry.contains("expected_max_rel_residual")
                          ? entry.at("expected_max_rel_residual").get<double>()
                          : 1e-8;
    if (entry.contains("generator")) {
      std::string gen = entry.at("generator").get<std::string>();
      int count = entry.contains("count") ? entry.at("count").get<int>() : 1;
      auto blocks = generate_params(gen, rng, entry, count);
      for (auto& params : blocks) {
        SuiteEntry e;
        // generated entries map onto the identity the generator is named for
        e.identity_id = gen.substr(0, gen.rfind("_random"));
        if (entry.contains("identity_id"))
          e.identity_id = entry.at("identity_id").get<std::string>();
        e.params = std::move(params);
        validate_identity_params(e.identity_id, e.params);
        e.opts = opts;
        e.expected_max_rel_residual = expected;
        cfg.entries.push_back(std::move(e));
      }
      continue;
    }
    if (!entry.contains("identity_id"))
      throw DomainError("suite entry needs 'identity_id' or 'generator'");
    SuiteEntry e;
    e.identity_id = entry.at("identity_id").get<std::string>();
    e.params = entry.contains("params") ? entry.at("params") : json::object();
    validate_identity_params(e.identity_id, e.params);
    e.opts = opts;
    e.expected_max_rel_residual = expected;
    cfg.entries.push_back(std::move(e));
  }
  return cfg;
}

SuiteResult run_suite(const SuiteConfig& config, int jobs) {
  SuiteResult result;
  result.records.resize(config.entries.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= config.entries.size()) return;
      const SuiteEntry& e = config.entries[i];
      SuiteRecord& rec = result.records[i];
      rec.identity_id = e.identity_id;
      rec.params = e.params;
      try {
        if (identity_out_of_regime(e.identity_id, e.params, e.opts)) {
          rec.status = "skip";
          rec.report.identity_id = e.identity_id;
          continue;
        }
        if (e.identity_id == "diagonal_binomial_sign") {
          double u = e.params.contains("u") ? param_real(e.params, "u") : 0.05;
          auto finding = diagonal_binomial_sign(u);
          rec.report = finding.report;
          rec.params["decided_sign"] = finding.decided_sign;
          rec.status = rec.report.rel_residual <= e.expected_max_rel_residual
                           ? "pass"
                           : "fail";
          continue;
        }
        rec.report = run_identity(e.identity_id, e.params, e.opts);
        bool pass = rec.report.converged &&
                    rec.report.rel_residual <= e.expected_max_rel_residual;
        rec.status = pass ? "pass" : "fail";
      } catch (const NonConvergenceError&) {
        rec.status = "fail";
        rec.report.identity_id = e.identity_id;
      } catch (const Error&) {
        rec.status = "error";
        rec.report.identity_id = e.identity_id;
      }
    }
  };
  int nthreads = std::max(1, jobs);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& rec : result.records) {
    if (rec.status == "pass")
      ++result.passed;
    else if (rec.status == "skip")
      ++result.skipped;
    else
      ++result.failed;  // fail and error both gate the exit code
  }
  return result;
}

std::string SuiteResult::summary() const {
  std::ostringstream os;
  os << passed << " passed / " << failed << " failed / " << skipped
     << " skipped";
  return os.str();
}

json suite_report_json(const SuiteResult& result) {
  json records = json::array();
  for (const auto& rec : result.records) {
    json r;
    r["identity_id"] = rec.identity_id;
    r["params"] = rec.params;
    r["lhs"] = cplx_to_json(rec.report.lhs);
    r["rhs"] = cplx_to_json(rec.report.rhs);
    r["abs_residual"] = rec.report.abs_residual;
    r["rel_residual"] = rec.report.rel_residual;
    r["truncation_order"] = rec.report.truncation_order;
    r["converged"] = rec.report.converged;
    r["status"] = rec.status;
    r["wall_time_s"] = rec.report.wall_time;
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string suite_report_csv(const SuiteResult& result) {
  std::ostringstream os;
  os << "identity_id,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,"
        "rel_residual,truncation_order,converged,status,wall_time_s\r\n";
  for (const auto& rec : result.records) {
    os << csv_quote(rec.identity_id) << ',' << csv_quote(rec.params.dump())
       << ',' << fmt_double(rec.report.lhs.real()) << ','
       << fmt_double(rec.report.lhs.imag()) << ','
       << fmt_double(rec.report.rhs.real()) << ','
       << fmt_double(rec.report.rhs.imag()) << ','
       << fmt_double(rec.report.abs_residual) << ','
       << fmt_double(rec.report.rel_residual) << ','
       << rec.report.truncation_order << ','
       << (rec.report.converged ? "true" : "false") << ',' << rec.status << ','
       << fmt_double(rec.report.wall_time) << "\r\n";
  }
  return os.str();
}

}  // namespace mlag
