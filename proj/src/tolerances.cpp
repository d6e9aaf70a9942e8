#include "krange/tolerances.hpp"

#include <charconv>
#include <cmath>

#include "krange/errors.hpp"

namespace krange {

namespace {

double* field(Tolerances& t, std::string_view name) {
  if (name == "psd") return &t.psd;
  if (name == "rank_rel") return &t.rank_rel;
  if (name == "rank_abs") return &t.rank_abs;
  if (name == "residual") return &t.residual;
  if (name == "norm_equality") return &t.norm_equality;
  if (name == "isometry") return &t.isometry;
  if (name == "monotone_slack") return &t.monotone_slack;
  if (name == "lemma") return &t.lemma;
  if (name == "pullback_equality") return &t.pullback_equality;
  if (name == "positivity") return &t.positivity;
  if (name == "contraction") return &t.contraction;
  if (name == "tie") return &t.tie;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> all = {
      "psd",        "rank_rel", "rank_abs",          "residual",   "norm_equality", "isometry",
      "monotone_slack", "lemma", "pullback_equality", "positivity", "contraction",   "tie"};
  return all;
}

double Tolerances::get(std::string_view name) const {
  auto* p = field(const_cast<Tolerances&>(*this), name);
  if (p == nullptr) throw Error(ErrorKind::InvalidArgument, "unknown tolerance '" + std::string(name) + "'");
  return *p;
}

void Tolerances::set(std::string_view name, double value) {
  auto* p = field(*this, name);
  if (p == nullptr) throw Error(ErrorKind::InvalidArgument, "unknown tolerance '" + std::string(name) + "'");
  if (!std::isfinite(value) || value < 0.0)
    throw Error(ErrorKind::InvalidArgument, "tolerance '" + std::string(name) + "' must be finite and >= 0");
  *p = value;
}

void Tolerances::apply_overrides(std::string_view spec) {
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const auto item = trim(spec.substr(0, comma));
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::InvalidArgument, "tolerance override '" + std::string(item) + "' is not name=value");
    const auto name = trim(item.substr(0, eq));
    const auto text = trim(item.substr(eq + 1));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw Error(ErrorKind::InvalidArgument, "bad value for tolerance '" + std::string(name) + "'");
    set(name, value);
  }
}

std::vector<std::pair<std::string, double>> Tolerances::entries() const {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& n : names()) out.emplace_back(n, get(n));
  return out;
}

}  // namespace krange
