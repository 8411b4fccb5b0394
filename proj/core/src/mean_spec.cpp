#include "supnorm/mean_spec.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "supnorm/csv.hpp"
#include "supnorm/error.hpp"

namespace supnorm {

namespace {

constexpr double kRelexSup = 0.1;

// The sloped pieces are written so that they hit +-0.1 at the breakpoints
// without overshooting; the final clamp guards the remaining rounding.
double relex1(double t) {
  double v = 0.0;
  if (t <= 0.2) {
    v = 0.5 * t;
  } else if (t <= 0.3) {
    v = 0.1;
  } else if (t <= 0.7) {
    v = 0.25 - 0.5 * t;
  } else if (t <= 0.8) {
    v = -0.1;
  } else {
    v = 0.5 * t - 0.5;
  }
  return std::clamp(v, -kRelexSup, kRelexSup);
}

double relex2(double t) {
  double v = 0.0;
  if (t <= 0.25) {
    v = 0.4 * t;
  } else if (t <= 0.75) {
    v = 0.1;
  } else {
    v = 0.4 - 0.4 * t;
  }
  return std::clamp(v, -kRelexSup, kRelexSup);
}

int checked_k(double parameter) {
  if (!(parameter >= 1.0) || parameter != std::floor(parameter) || parameter > 1000.0) {
    throw InvalidInput(fmt::format("meanclass2 needs an integer k >= 1, got {}", parameter));
  }
  return static_cast<int>(parameter);
}

}  // namespace

MeanSpec MeanSpec::relex_with_sup(MeanFamily family, double sup) {
  if (family != MeanFamily::kRelex1 && family != MeanFamily::kRelex2) {
    throw InvalidInput("relex_with_sup needs relex1 or relex2");
  }
  return {family, 0.0, sup / kRelexSup};
}

MeanSpec MeanSpec::for_parameter(MeanFamily family, double p) {
  switch (family) {
    case MeanFamily::kZero:
      return zero();
    case MeanFamily::kMeanClass1:
      return meanclass1(p);
    case MeanFamily::kMeanClass2:
      return {MeanFamily::kMeanClass2, static_cast<double>(checked_k(p)), 1.0};
    case MeanFamily::kRelex1:
    case MeanFamily::kRelex2:
      return relex_with_sup(family, p);
  }
  throw InvalidInput("unknown mean family");
}

MeanFamily parse_mean_family(std::string_view name) {
  if (name == "zero") return MeanFamily::kZero;
  if (name == "meanclass1") return MeanFamily::kMeanClass1;
  if (name == "meanclass2") return MeanFamily::kMeanClass2;
  if (name == "relex1") return MeanFamily::kRelex1;
  if (name == "relex2") return MeanFamily::kRelex2;
  throw InvalidInput(fmt::format("unknown mean family '{}'", name));
}

std::string_view to_string(MeanFamily family) {
  switch (family) {
    case MeanFamily::kZero:
      return "zero";
    case MeanFamily::kMeanClass1:
      return "meanclass1";
    case MeanFamily::kMeanClass2:
      return "meanclass2";
    case MeanFamily::kRelex1:
      return "relex1";
    case MeanFamily::kRelex2:
      return "relex2";
  }
  return "unknown";
}

MeanSpec parse_mean_spec(std::string_view text) {
  MeanSpec spec;
  std::string_view head = text;
  if (const auto star = text.find('*'); star != std::string_view::npos) {
    spec.amplitude = parse_double(text.substr(star + 1));
    head = text.substr(0, star);
  }
  std::string_view name = head;
  if (const auto colon = head.find(':'); colon != std::string_view::npos) {
    name = head.substr(0, colon);
    spec.parameter = parse_double(head.substr(colon + 1));
  }
  spec.family = parse_mean_family(name);
  if (spec.family == MeanFamily::kMeanClass2) {
    checked_k(spec.parameter);
  }
  return spec;
}

std::string to_string(const MeanSpec& spec) {
  std::string out(to_string(spec.family));
  if (spec.family == MeanFamily::kMeanClass1 || spec.family == MeanFamily::kMeanClass2) {
    out += ":" + format_double(spec.parameter);
  }
  if (spec.amplitude != 1.0) {
    out += "*" + format_double(spec.amplitude);
  }
  return out;
}

double meanclass2_normalizer(int k) {
  if (k < 1) {
    throw InvalidInput("meanclass2 needs k >= 1");
  }
  // (1 - u)^k = sum_j C(k,j) (-1)^j u^j with u = t(1-t).
  double total = 0.0;
  double binom = 1.0;
  double beta = 1.0;  // (j!)^2 / (2j+1)!
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      beta *= static_cast<double>(j) / (2.0 * (2.0 * j + 1.0));
    }
    total += (j % 2 == 0 ? 1.0 : -1.0) * binom * beta;
    binom = binom * (k - j) / (j + 1);
  }
  return total;
}

double eval_mean_at(const MeanSpec& spec, double t) {
  double base = 0.0;
  switch (spec.family) {
    case MeanFamily::kZero:
      base = 0.0;
      break;
    case MeanFamily::kMeanClass1:
      base = spec.parameter * t * (1.0 - t);
      break;
    case MeanFamily::kMeanClass2: {
      const int k = checked_k(spec.parameter);
      base = 0.1 * std::pow(1.0 - t * (1.0 - t), k) / meanclass2_normalizer(k);
      break;
    }
    case MeanFamily::kRelex1:
      base = relex1(t);
      break;
    case MeanFamily::kRelex2:
      base = relex2(t);
      break;
    default:
      throw InvalidInput("unknown mean family");
  }
  return spec.amplitude * base;
}

Curve eval_mean(const MeanSpec& spec, const Grid& grid) {
  Eigen::VectorXd values(static_cast<Eigen::Index>(grid.size()));
  if (spec.family == MeanFamily::kMeanClass2) {
    const int k = checked_k(spec.parameter);
    const double norm = meanclass2_normalizer(k);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      values[static_cast<Eigen::Index>(i)] =
          spec.amplitude * 0.1 * std::pow(1.0 - t * (1.0 - t), k) / norm;
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      values[static_cast<Eigen::Index>(i)] = eval_mean_at(spec, grid[i]);
    }
  }
  return Curve(grid, std::move(values));
}

}  // namespace supnorm
