#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hdrband/interval_union.hpp"
#include "hdrband/sample.hpp"

namespace hdrband {

struct MixtureComponent {
  double weight;
  double mean;
  double sd;
};

//! Finite mixture of univariate normals with closed-form density,
//! derivatives, distribution function and sampler.
class NormalMixture {
 public:
  //! Throws std::invalid_argument unless every weight and sd is positive and
  //! the weights sum to one within 1e-12.
  explicit NormalMixture(std::vector<MixtureComponent> components);

  static NormalMixture standard_normal();

  std::span<const MixtureComponent> components() const { return components_; }

  //! f, f' or f'' at x. Throws std::invalid_argument for other orders.
  double eval(int order, double x) const;
  double pdf(double x) const { return eval(0, x); }
  double cdf(double x) const;

  //! n draws, sorted. Draw i depends only on (seed, i).
  Sample sample(std::size_t n, std::uint64_t seed) const;

  //! Interval outside of which the density is negligible (12 sd per component).
  Interval effective_support() const;

 private:
  std::vector<MixtureComponent> components_;
};

//! `normal` and the benchmark normal mixtures `mw1` .. `mw10`.
NormalMixture mixture_preset(std::string_view name);
std::vector<std::string> mixture_preset_names();

//! A preset name, or a JSON document {"components":[{"w":..,"mu":..,"sd":..}]}.
NormalMixture parse_mixture(std::string_view text);

void to_json(nlohmann::json& j, const NormalMixture& m);
NormalMixture mixture_from_json(const nlohmann::json& j);

//! A level crossing x_j with first and second derivative values there.
struct Crossing {
  double x;
  double slope;
  double curvature;
};

void to_json(nlohmann::json& j, const Crossing& c);

//! Exact highest-density region of a mixture.
struct HdrOracle {
  double tau;
  double level;
  IntervalUnion region;
  std::vector<Crossing> crossings;
};

void to_json(nlohmann::json& j, const HdrOracle& o);

//! Level f_tau, region R_tau and the crossings of f = f_tau, located by
//! bisection on the level with the region mass taken from the mixture CDF.
//! Throws std::invalid_argument if tau is outside (0, 1) and
//! std::domain_error when the level is tangent to f (|f'| < 1e-6 at a
//! crossing).
HdrOracle hdr_oracle(const NormalMixture& m, double tau);

}  // namespace hdrband
