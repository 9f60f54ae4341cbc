#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mldkit/network.hpp"

namespace mldkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;

// Bounds at or beyond this magnitude (in MVA, as written in the file) are
// treated as unbounded.
inline constexpr double kInfBoundMva = 1e8;

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view s) {
  auto pos = s.find('%');
  if (pos != std::string_view::npos) s = s.substr(0, pos);
  return s;
}

inline std::vector<double> parse_row(std::string_view s, int line_no) {
  std::vector<double> row;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ';' || c == ',') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != ';' &&
           s[j] != ',')
      ++j;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, value);
    if (ec != std::errc{} || ptr != s.data() + j)
      throw ParseError(line_no, "malformed number '" + std::string(s.substr(i, j - i)) + "'");
    row.push_back(value);
    i = j;
  }
  return row;
}

inline double signed_inf_filter(double mva) {
  if (mva >= kInfBoundMva) return kUnlimited;
  if (mva <= -kInfBoundMva) return -kUnlimited;
  return mva;
}

inline double clamp_angle(double rad) {
  if (rad < -kMaxAngleDiff) return -kMaxAngleDiff;
  if (rad > kMaxAngleDiff) return kMaxAngleDiff;
  return rad;
}

}  // namespace detail

/// Parses the matrix-style case format (baseMVA, bus, gen, branch tables;
/// gencost optional) into a validated per-unit Network.
inline Network parse_case(const std::string& text) {
  using namespace detail;

  std::optional<double> base_mva;
  std::vector<std::vector<double>> bus_rows, gen_rows, branch_rows, gencost_rows;
  std::vector<int> bus_lines, gen_lines, branch_lines;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string table;  // empty when outside a matrix block
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (table.empty()) {
      auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;
      std::string_view lhs = trim(line.substr(0, eq));
      std::string_view rhs = trim(line.substr(eq + 1));
      auto dot = lhs.rfind('.');
      if (dot != std::string_view::npos) lhs = lhs.substr(dot + 1);
      if (lhs == "baseMVA") {
        auto row = parse_row(rhs, line_no);
        if (row.size() != 1) throw ParseError(line_no, "baseMVA expects a single value");
        base_mva = row[0];
      } else if (lhs == "bus" || lhs == "gen" || lhs == "branch" || lhs == "gencost") {
        if (rhs.substr(0, 1) != "[") throw ParseError(line_no, "expected '[' after table name");
        table = std::string(lhs);
        rhs = trim(rhs.substr(1));
        if (!rhs.empty() && rhs.find(']') == std::string_view::npos) {
          // data on the same line as the opening bracket
          raw = std::string(rhs);
          --line_no;
          in.putback('\n');
          for (auto it = raw.rbegin(); it != raw.rend(); ++it) in.putback(*it);
          ++line_no;
        }
      }
      continue;
    }

    bool closes = false;
    auto close = line.find(']');
    if (close != std::string_view::npos) {
      closes = true;
      line = trim(line.substr(0, close));
    }
    if (!line.empty()) {
      auto row = parse_row(line, line_no);
      if (!row.empty()) {
        if (table == "bus") {
          bus_rows.push_back(row);
          bus_lines.push_back(line_no);
        } else if (table == "gen") {
          gen_rows.push_back(row);
          gen_lines.push_back(line_no);
        } else if (table == "branch") {
          branch_rows.push_back(row);
          branch_lines.push_back(line_no);
        } else {
          gencost_rows.push_back(row);
        }
      }
    }
    if (closes) table.clear();
  }

  if (!base_mva) throw ParseError(line_no, "missing baseMVA");
  if (bus_rows.empty()) throw ParseError(line_no, "missing bus table");
  if (gen_rows.empty()) throw ParseError(line_no, "missing gen table");
  if (branch_rows.empty()) throw ParseError(line_no, "missing branch table");
  const double base = *base_mva;
  if (!(base > 0.0)) throw ParseError(line_no, "baseMVA must be positive");

  Network net;
  net.base_mva = base;

  for (std::size_t r = 0; r < bus_rows.size(); ++r) {
    const auto& row = bus_rows[r];
    if (row.size() < 13) throw ParseError(bus_lines[r], "bus row needs 13 columns");
    Bus b;
    b.id = static_cast<int>(row[0]);
    b.in_service = static_cast<int>(row[1]) != 4;
    b.v_max = row[11];
    b.v_min = row[12];
    net.buses.push_back(b);

    const double pd = row[2], qd = row[3], gs = row[4], bs = row[5];
    if (pd != 0.0 || qd != 0.0) {
      Load l;
      l.id = static_cast<int>(net.loads.size()) + 1;
      l.bus = b.id;
      l.demand = Complex{pd, qd} / base;
      l.priority = 1.0;
      l.in_service = b.in_service;
      net.loads.push_back(l);
    }
    if (gs != 0.0 || bs != 0.0) {
      Shunt s;
      s.id = static_cast<int>(net.shunts.size()) + 1;
      s.bus = b.id;
      s.admittance = Complex{gs, bs} / base;
      s.in_service = b.in_service;
      net.shunts.push_back(s);
    }
  }

  for (std::size_t r = 0; r < gen_rows.size(); ++r) {
    const auto& row = gen_rows[r];
    if (row.size() < 10) throw ParseError(gen_lines[r], "gen row needs 10 columns");
    Generator g;
    g.id = static_cast<int>(r) + 1;
    g.bus = static_cast<int>(row[0]);
    g.q_max = detail::signed_inf_filter(row[3]) / base;
    g.q_min = detail::signed_inf_filter(row[4]) / base;
    g.in_service = row[7] > 0.0;
    g.p_max = detail::signed_inf_filter(row[8]) / base;
    g.p_min = detail::signed_inf_filter(row[9]) / base;
    if (r < gencost_rows.size()) {
      const auto& cost = gencost_rows[r];
      // polynomial rows: model startup shutdown n c[n-1] ... c0
      if (!cost.empty() && static_cast<int>(cost[0]) == 2 && cost.size() >= 4) {
        int n = static_cast<int>(cost[3]);
        if (n == 3 && cost.size() >= 7) {
          g.cost_c2 = cost[4];
          g.cost_c1 = cost[5];
          g.cost_c0 = cost[6];
        } else if (n == 2 && cost.size() >= 6) {
          g.cost_c1 = cost[4];
          g.cost_c0 = cost[5];
        }
      }
    }
    net.generators.push_back(g);
  }

  for (std::size_t r = 0; r < branch_rows.size(); ++r) {
    const auto& row = branch_rows[r];
    if (row.size() < 11) throw ParseError(branch_lines[r], "branch row needs 11 columns");
    Branch br;
    br.id = static_cast<int>(r) + 1;
    br.from_bus = static_cast<int>(row[0]);
    br.to_bus = static_cast<int>(row[1]);
    const double res = row[2], x = row[3], chg = row[4];
    if (res == 0.0 && x == 0.0)
      throw ParseError(branch_lines[r], "branch with zero impedance unsupported");
    br.r = res;
    br.x = x;
    br.series_admittance = series_admittance(res, x);
    br.charge_from = Complex{0.0, chg / 2.0};
    br.charge_to = Complex{0.0, chg / 2.0};
    br.rating = row[5] == 0.0 ? kUnlimited : row[5] / base;
    const double ratio = row[8] == 0.0 ? 1.0 : row[8];
    const double shift = row[9] * detail::kPi / 180.0;
    br.tap = std::polar(ratio, shift);
    br.in_service = row[10] > 0.0;
    if (row.size() >= 13 && !(row[11] == 0.0 && row[12] == 0.0)) {
      br.angmin = detail::clamp_angle(row[11] * detail::kPi / 180.0);
      br.angmax = detail::clamp_angle(row[12] * detail::kPi / 180.0);
    }
    net.branches.push_back(br);
  }

  net.finalize();
  return net;
}

/// Serializes a Network back to the case format. Canonical output: loads fold
/// into bus PD/QD, shunts into GS/BS, unlimited ratings and unbounded
/// generator limits become 0 and +-1e9. Values print with full precision so
/// a parse round-trip reproduces the Network exactly.
inline std::string write_case(const Network& net, const std::string& name = "mldkit_case") {
  using namespace detail;
  std::string out;
  out.reserve(4096);
  char buf[512];

  auto num = [&](double v) {
    if (v == kUnlimited) return std::string("1e9");
    if (v == -kUnlimited) return std::string("-1e9");
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  out += "function mpc = " + name + "\n";
  out += "mpc.version = '2';\n";
  out += "mpc.baseMVA = " + num(net.base_mva) + ";\n";

  out += "mpc.bus = [\n";
  for (const Bus& b : net.buses) {
    Complex demand{0.0, 0.0};
    for (const Load& l : net.loads)
      if (l.bus == b.id) demand += l.demand;
    Complex ys{0.0, 0.0};
    for (const Shunt& s : net.shunts)
      if (s.bus == b.id) ys += s.admittance;
    std::snprintf(buf, sizeof(buf), "\t%d\t%d", b.id, b.in_service ? 1 : 4);
    out += buf;
    out += "\t" + num(demand.real() * net.base_mva) + "\t" + num(demand.imag() * net.base_mva);
    out += "\t" + num(ys.real() * net.base_mva) + "\t" + num(ys.imag() * net.base_mva);
    out += "\t1\t1\t0\t0\t1\t" + num(b.v_max) + "\t" + num(b.v_min) + ";\n";
  }
  out += "];\n";

  out += "mpc.gen = [\n";
  for (const Generator& g : net.generators) {
    std::snprintf(buf, sizeof(buf), "\t%d", g.bus);
    out += buf;
    out += "\t0\t0\t" + num(g.q_max * net.base_mva) + "\t" + num(g.q_min * net.base_mva);
    out += "\t1\t" + num(net.base_mva) + "\t" + std::string(g.in_service ? "1" : "0");
    out += "\t" + num(g.p_max * net.base_mva) + "\t" + num(g.p_min * net.base_mva) + ";\n";
  }
  out += "];\n";

  out += "mpc.branch = [\n";
  for (const Branch& br : net.branches) {
    std::snprintf(buf, sizeof(buf), "\t%d\t%d", br.from_bus, br.to_bus);
    out += buf;
    out += "\t" + num(br.r) + "\t" + num(br.x);
    out += "\t" + num(2.0 * br.charge_from.imag());
    out += "\t" + (br.rating == kUnlimited ? std::string("0") : num(br.rating * net.base_mva));
    out += "\t0\t0";
    const double ratio = std::abs(br.tap);
    const double shift = std::arg(br.tap) * 180.0 / kPi;
    out += "\t" + (ratio == 1.0 && shift == 0.0 ? std::string("0") : num(ratio));
    out += "\t" + num(shift);
    out += "\t" + std::string(br.in_service ? "1" : "0");
    out += "\t" + num(br.angmin * 180.0 / kPi) + "\t" + num(br.angmax * 180.0 / kPi) + ";\n";
  }
  out += "];\n";

  out += "mpc.gencost = [\n";
  for (const Generator& g : net.generators) {
    out += "\t2\t0\t0\t3\t" + num(g.cost_c2) + "\t" + num(g.cost_c1) + "\t" + num(g.cost_c0) +
           ";\n";
  }
  out += "];\n";
  return out;
}

}  // namespace mldkit
