#include "kssvar/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace kssvar {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_uint(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
}

std::string fmt(double x) { return nlohmann::json(x).dump(); }

const char* const kKeys[] = {"m",           "d",           "n_samples",  "master_seed",     "workers",
                             "strict",      "out_dir",     "min_width",  "quad_abs_tol",    "quad_rel_tol",
                             "g_nodes",     "g_samples",   "vinf_route", "hermite_samples", "i2d_degree"};

void apply_env(ExperimentConfig& c) {
  for (const char* key : kKeys) {
    std::string name = "KSSVAR_";
    for (const char* p = key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* v = std::getenv(name.c_str())) c.set(key, trim(v));
  }
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "m") {
    m = parse_uint<unsigned>(key, value);
  } else if (key == "d") {
    d_list.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) d_list.push_back(parse_uint<unsigned>(key, trim(item)));
  } else if (key == "n_samples") {
    n_samples = parse_uint<std::uint64_t>(key, value);
  } else if (key == "master_seed") {
    master_seed = parse_uint<std::uint64_t>(key, value);
  } else if (key == "workers") {
    workers = parse_uint<unsigned>(key, value);
  } else if (key == "strict") {
    strict = parse_bool(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "min_width") {
    min_width = parse_double(key, value);
  } else if (key == "quad_abs_tol") {
    quad_abs_tol = parse_double(key, value);
  } else if (key == "quad_rel_tol") {
    quad_rel_tol = parse_double(key, value);
  } else if (key == "g_nodes") {
    g_nodes = parse_uint<unsigned>(key, value);
  } else if (key == "g_samples") {
    g_samples = parse_uint<std::uint64_t>(key, value);
  } else if (key == "vinf_route") {
    if (value != "product" && value != "direct") throw std::invalid_argument("config: vinf_route must be product or direct");
    vinf_route = value;
  } else if (key == "hermite_samples") {
    hermite_samples = parse_uint<std::uint64_t>(key, value);
  } else if (key == "i2d_degree") {
    i2d_degree = parse_uint<unsigned>(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (m == 0) throw std::invalid_argument("config: m must be >= 1");
  if (d_list.empty()) throw std::invalid_argument("config: d must list at least one degree");
  for (std::size_t i = 0; i < d_list.size(); ++i) {
    if (d_list[i] <= 1) throw std::invalid_argument("config: d must be > 1");
    if (i > 0 && d_list[i] <= d_list[i - 1]) throw std::invalid_argument("config: d sweep must be strictly increasing");
  }
  if (n_samples < 2) throw std::invalid_argument("config: n_samples must be >= 2");
  if (workers == 0) throw std::invalid_argument("config: workers must be >= 1");
  if (!(min_width > 0.0)) throw std::invalid_argument("config: min_width must be positive");
  if (!(quad_abs_tol > 0.0) || !(quad_rel_tol >= 0.0)) throw std::invalid_argument("config: bad quadrature tolerances");
  if (g_nodes < 8) throw std::invalid_argument("config: g_nodes must be >= 8");
  if (g_samples < 2 || hermite_samples < 2) throw std::invalid_argument("config: sample budgets must be >= 2");
  if (i2d_degree < 2) throw std::invalid_argument("config: i2d_degree must be >= 2");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "m = " << m << "\n";
  os << "d = ";
  for (std::size_t i = 0; i < d_list.size(); ++i) os << (i ? "," : "") << d_list[i];
  os << "\n";
  os << "n_samples = " << n_samples << "\n";
  os << "master_seed = " << master_seed << "\n";
  os << "workers = " << workers << "\n";
  os << "strict = " << (strict ? "true" : "false") << "\n";
  os << "out_dir = " << out_dir << "\n";
  os << "min_width = " << fmt(min_width) << "\n";
  os << "quad_abs_tol = " << fmt(quad_abs_tol) << "\n";
  os << "quad_rel_tol = " << fmt(quad_rel_tol) << "\n";
  os << "g_nodes = " << g_nodes << "\n";
  os << "g_samples = " << g_samples << "\n";
  os << "vinf_route = " << vinf_route << "\n";
  os << "hermite_samples = " << hermite_samples << "\n";
  os << "i2d_degree = " << i2d_degree << "\n";
  return os.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text, bool env) {
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key = value");
    c.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  if (env) apply_env(c);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path, bool env) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), env);
}

ExperimentConfig ExperimentConfig::defaults(bool env) {
  ExperimentConfig c;
  if (env) apply_env(c);
  return c;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return a.to_text() == b.to_text(); }

}  // namespace kssvar
