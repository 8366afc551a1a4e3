#include "qcduality/model.hpp"

#include <cctype>
#include <charconv>

namespace qcd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::CoincidingCoordinates: return "CoincidingCoordinates";
    case ErrorCode::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorCode::PoleCollision: return "PoleCollision";
    case ErrorCode::SingularityApproached: return "SingularityApproached";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoSolutionsFound: return "NoSolutionsFound";
    case ErrorCode::DegenerateCombination: return "DegenerateCombination";
    case ErrorCode::ExtractionIllConditioned: return "ExtractionIllConditioned";
  }
  return "Unknown";
}

std::string to_string(RootSystem kind) {
  switch (kind) {
    case RootSystem::A: return "A";
    case RootSystem::B: return "B";
    case RootSystem::C: return "C";
    case RootSystem::D: return "D";
  }
  return "?";
}

RootSystem parse_root_system(std::string_view text) {
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'A': return RootSystem::A;
      case 'B': return RootSystem::B;
      case 'C': return RootSystem::C;
      case 'D': return RootSystem::D;
      default: break;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown root system '" + std::string(text) + "'");
}

std::size_t lax_size(RootSystem kind, std::size_t n) {
  switch (kind) {
    case RootSystem::A: return n;
    case RootSystem::B: return 2 * n + 1;
    case RootSystem::C:
    case RootSystem::D: return 2 * n;
  }
  return 0;
}

void ModelSpec::validate() const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  if (m < 0 || m > n / 2) throw Error(ErrorCode::InvalidArgument, "magnon number must satisfy 0 <= m <= n/2");
  if (static_cast<int>(z.size()) != n)
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(n) + " inhomogeneities, got " + std::to_string(z.size()));
  if ((root_system == RootSystem::B || root_system == RootSystem::D) && xi != Complex{})
    throw Error(ErrorCode::InvalidArgument, "xi must be 0 for root system " + to_string(root_system));
  if (hbar == Complex{}) throw Error(ErrorCode::InvalidArgument, "hbar must be nonzero");
  check_admissible<Complex>(z, root_system);
}

ModelSpec make_model(RootSystem kind, std::vector<Complex> z, int m, Complex xi, Complex hbar, Complex omega) {
  ModelSpec spec;
  spec.root_system = kind;
  spec.n = static_cast<int>(z.size());
  spec.m = m;
  spec.z = std::move(z);
  spec.xi = xi;
  spec.hbar = hbar;
  spec.omega = omega;
  spec.validate();
  return spec;
}

nlohmann::json complex_to_json(const Complex& z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::InvalidArgument, "complex value must be a number, a string, or an [re, im] pair");
}

void to_json(nlohmann::json& j, const ModelSpec& spec) {
  nlohmann::json z = nlohmann::json::array();
  for (const auto& v : spec.z) z.push_back(complex_to_json(v));
  j = nlohmann::json{{"root_system", to_string(spec.root_system)},
                     {"n", spec.n},
                     {"m", spec.m},
                     {"z", z},
                     {"xi", complex_to_json(spec.xi)},
                     {"hbar", complex_to_json(spec.hbar)},
                     {"omega", complex_to_json(spec.omega)}};
}

void from_json(const nlohmann::json& j, ModelSpec& spec) {
  spec.root_system = parse_root_system(j.at("root_system").get<std::string>());
  spec.n = j.at("n").get<int>();
  spec.m = j.value("m", 0);
  spec.z.clear();
  for (const auto& v : j.at("z")) spec.z.push_back(complex_from_json(v));
  spec.xi = j.contains("xi") ? complex_from_json(j["xi"]) : Complex{};
  spec.hbar = j.contains("hbar") ? complex_from_json(j["hbar"]) : Complex{1.0, 0.0};
  spec.omega = j.contains("omega") ? complex_from_json(j["omega"]) : Complex{};
}

namespace {

double parse_double(std::string_view s) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != str.size()) throw Error(ErrorCode::InvalidArgument, "not a number: " + str);
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty complex literal");
  if (s.back() != 'i' && s.back() != 'j') return {parse_double(s), 0.0};
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_double(s)};
  return {parse_double(std::string_view(s).substr(0, split)), parse_double(std::string_view(s).substr(split))};
}

}  // namespace qcd
