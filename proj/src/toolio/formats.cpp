#include "bdcone/toolio/formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bdcone/conic/cones.hpp"

namespace bdcone {

namespace {

using Triplet = Eigen::Triplet<double, int>;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr long double kSqrt2 = std::numbers::sqrt2_v<long double>;

// Matrix coefficient of an off-diagonal PSD entry, a / sqrt(2). Kept in long
// double and printed with 21 digits so the importer recovers a exactly.
long double offdiag(double a) { return static_cast<long double>(a) / kSqrt2; }

std::string num(long double v) {
  if (static_cast<long double>(static_cast<double>(v)) == v) return num(static_cast<double>(v));
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

const char* cbf_cone(ConeKind k) {
  switch (k) {
    case ConeKind::Free: return "F";
    case ConeKind::Zero: return "L=";
    case ConeKind::NonNeg: return "L+";
    case ConeKind::SecondOrder: return "Q";
    case ConeKind::PSD: return "PSD";
  }
  return "?";
}

ConeKind cbf_kind(const std::string& s) {
  if (s == "F") return ConeKind::Free;
  if (s == "L=") return ConeKind::Zero;
  if (s == "L+") return ConeKind::NonNeg;
  if (s == "Q") return ConeKind::SecondOrder;
  if (s == "PSD") return ConeKind::PSD;
  throw std::invalid_argument("CBF: unsupported cone '" + s + "'");
}

// Maps every column to (scalar index) or (psd variable, row, col).
struct ColumnMap {
  struct Entry {
    bool psd = false;
    std::size_t index = 0;
    std::size_t i = 0;
    std::size_t j = 0;
  };
  std::vector<Entry> cols;
  std::size_t nscalar = 0;
  std::vector<std::size_t> psd_sides;
};

ColumnMap column_map(const ConeLayout& cones) {
  ColumnMap m;
  m.cols.resize(cones.total_size());
  for (std::size_t b = 0; b < cones.num_blocks(); ++b) {
    const auto& blk = cones.blocks()[b];
    const std::size_t off = cones.offset(b);
    if (blk.kind == ConeKind::PSD) {
      const std::size_t side = blk.dim;
      for (std::size_t j = 0; j < side; ++j) {
        for (std::size_t i = j; i < side; ++i) {
          m.cols[off + psd_vec_index(i, j, side)] = {true, m.psd_sides.size(), i, j};
        }
      }
      m.psd_sides.push_back(side);
    } else {
      for (std::size_t k = 0; k < blk.size(); ++k) m.cols[off + k] = {false, m.nscalar++, 0, 0};
    }
  }
  return m;
}

// Reads the next non-comment, non-empty line.
bool next_line(std::istream& in, std::string& line, const char* comments) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    if (std::string_view(comments).find(line[b]) != std::string_view::npos) continue;
    return true;
  }
  return false;
}

[[noreturn]] void bad(const std::string& fmt, const std::string& what) {
  throw std::invalid_argument(fmt + ": " + what);
}

template <typename... T>
void read_fields(const std::string& fmt, const std::string& line, T&... fields) {
  std::istringstream is(line);
  ((is >> fields), ...);
  if (is.fail()) bad(fmt, "malformed line '" + line + "'");
}

double parse_num(const std::string& fmt, const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad(fmt, "bad number '" + s + "'");
  return v;
}

long double parse_long(const std::string& fmt, const std::string& s) {
  long double v = 0.0L;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad(fmt, "bad number '" + s + "'");
  return v;
}

// Inverse of offdiag.
double parse_offdiag(const std::string& fmt, const std::string& s) {
  return static_cast<double>(parse_long(fmt, s) * kSqrt2);
}

ConicProblem assemble(const std::vector<ConeBlock>& blocks, std::size_t rows, std::vector<Triplet>& trips,
                      const Eigen::VectorXd& c, const Eigen::VectorXd& b) {
  ConicProblem p;
  p.cones = ConeLayout(blocks);
  p.c = c;
  p.b = b;
  p.A.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p.cones.total_size()));
  p.A.setFromTriplets(trips.begin(), trips.end());
  p.A.makeCompressed();
  p.validate();
  return p;
}

}  // namespace

void write_cbf(const ConicProblem& p, std::ostream& out) {
  p.validate();
  const ColumnMap map = column_map(p.cones);
  out << "# blocks";
  for (const auto& blk : p.cones.blocks()) out << ' ' << cbf_cone(blk.kind) << ':' << blk.dim;
  out << "\nVER\n3\n\nOBJSENSE\nMIN\n\n";

  std::vector<std::pair<std::string, std::size_t>> scalar_cones;
  for (const auto& blk : p.cones.blocks()) {
    if (blk.kind == ConeKind::PSD) continue;
    scalar_cones.emplace_back(cbf_cone(blk.kind), blk.size());
  }
  out << "VAR\n" << map.nscalar << ' ' << scalar_cones.size() << '\n';
  for (const auto& [k, d] : scalar_cones) out << k << ' ' << d << '\n';
  out << '\n';
  if (!map.psd_sides.empty()) {
    out << "PSDVAR\n" << map.psd_sides.size() << '\n';
    for (std::size_t s : map.psd_sides) out << s << '\n';
    out << '\n';
  }
  if (p.num_rows() > 0) out << "CON\n" << p.num_rows() << " 1\nL= " << p.num_rows() << "\n\n";

  auto weight = [](const ColumnMap::Entry& e, double v) {
    return e.i == e.j ? num(v) : num(offdiag(v));
  };
  std::ostringstream objf, obja;
  std::size_t nobjf = 0, nobja = 0;
  for (Eigen::Index j = 0; j < p.c.size(); ++j) {
    if (p.c[j] == 0.0) continue;
    const auto& e = map.cols[static_cast<std::size_t>(j)];
    if (e.psd) {
      objf << e.index << ' ' << e.i << ' ' << e.j << ' ' << weight(e, p.c[j]) << '\n';
      ++nobjf;
    } else {
      obja << e.index << ' ' << num(p.c[j]) << '\n';
      ++nobja;
    }
  }
  if (nobjf) out << "OBJFCOORD\n" << nobjf << '\n' << objf.str() << '\n';
  if (nobja) out << "OBJACOORD\n" << nobja << '\n' << obja.str() << '\n';

  // Row-major order for reproducible output.
  const Eigen::SparseMatrix<double, Eigen::RowMajor, int> a = p.A;
  std::ostringstream fc, ac;
  std::size_t nf = 0, na = 0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor, int>::InnerIterator it(a, r); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto& e = map.cols[static_cast<std::size_t>(it.col())];
      if (e.psd) {
        fc << r << ' ' << e.index << ' ' << e.i << ' ' << e.j << ' ' << weight(e, it.value()) << '\n';
        ++nf;
      } else {
        ac << r << ' ' << e.index << ' ' << num(it.value()) << '\n';
        ++na;
      }
    }
  }
  if (nf) out << "FCOORD\n" << nf << '\n' << fc.str() << '\n';
  if (na) out << "ACOORD\n" << na << '\n' << ac.str() << '\n';
  std::ostringstream bc;
  std::size_t nb = 0;
  for (Eigen::Index r = 0; r < p.b.size(); ++r) {
    if (p.b[r] == 0.0) continue;
    bc << r << ' ' << num(-p.b[r]) << '\n';
    ++nb;
  }
  if (nb) out << "BCOORD\n" << nb << '\n' << bc.str() << '\n';
}

std::string to_cbf(const ConicProblem& p) {
  std::ostringstream os;
  write_cbf(p, os);
  return os.str();
}

ConicProblem read_cbf(std::istream& in) {
  const std::string F = "CBF";
  std::string line;
  std::vector<ConeBlock> order;
  std::vector<ConeBlock> scalar_blocks;
  std::vector<std::size_t> psd_sides;
  std::size_t nscalar = 0, rows = 0;
  bool saw_var = false;
  struct Coord {
    std::size_t row;
    bool psd;
    std::size_t index, i, j;
    std::string v;
  };
  std::vector<Coord> coords;  // row = SIZE_MAX for the objective
  std::vector<std::pair<std::size_t, double>> bcoords;
  constexpr std::size_t kObj = static_cast<std::size_t>(-1);

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# blocks", 0) == 0) {
      std::istringstream is(line.substr(8));
      std::string tok;
      while (is >> tok) {
        const auto colon = tok.rfind(':');
        if (colon == std::string::npos) bad(F, "malformed block list");
        order.push_back({cbf_kind(tok.substr(0, colon)),
                         static_cast<std::size_t>(parse_num(F, tok.substr(colon + 1)))});
      }
      continue;
    }
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    std::string key;
    std::istringstream(line) >> key;
    auto need = [&](std::string& l) {
      if (!next_line(in, l, "#")) bad(F, "unexpected end of file after " + key);
    };
    if (key == "VER") {
      need(line);
      if (parse_num(F, line.substr(line.find_first_not_of(" \t"))) > 3) bad(F, "unsupported version");
    } else if (key == "OBJSENSE") {
      need(line);
      std::string s;
      read_fields(F, line, s);
      if (s != "MIN") bad(F, "only OBJSENSE MIN is supported");
    } else if (key == "VAR") {
      need(line);
      std::size_t k = 0;
      read_fields(F, line, nscalar, k);
      std::size_t total = 0;
      for (std::size_t t = 0; t < k; ++t) {
        need(line);
        std::string cone;
        std::size_t d = 0;
        read_fields(F, line, cone, d);
        const ConeKind kind = cbf_kind(cone);
        if (kind == ConeKind::PSD) bad(F, "PSD in VAR section");
        scalar_blocks.push_back({kind, d});
        total += d;
      }
      if (total != nscalar) bad(F, "VAR cone sizes do not add up");
      saw_var = true;
    } else if (key == "PSDVAR") {
      need(line);
      std::size_t k = 0;
      read_fields(F, line, k);
      for (std::size_t t = 0; t < k; ++t) {
        need(line);
        std::size_t s = 0;
        read_fields(F, line, s);
        psd_sides.push_back(s);
      }
    } else if (key == "CON") {
      need(line);
      std::size_t k = 0;
      read_fields(F, line, rows, k);
      for (std::size_t t = 0; t < k; ++t) {
        need(line);
        std::string cone;
        std::size_t d = 0;
        read_fields(F, line, cone, d);
        if (cone != "L=") bad(F, "only L= constraint cones are supported");
      }
    } else if (key == "OBJACOORD" || key == "OBJFCOORD" || key == "ACOORD" || key == "FCOORD" ||
               key == "BCOORD") {
      need(line);
      std::size_t k = 0;
      read_fields(F, line, k);
      for (std::size_t t = 0; t < k; ++t) {
        need(line);
        std::istringstream is(line);
        Coord c{kObj, false, 0, 0, 0, {}};
        std::string v;
        if (key == "OBJACOORD") is >> c.index >> v;
        if (key == "OBJFCOORD") is >> c.index >> c.i >> c.j >> v;
        if (key == "ACOORD") is >> c.row >> c.index >> v;
        if (key == "FCOORD") is >> c.row >> c.index >> c.i >> c.j >> v;
        if (key == "BCOORD") is >> c.row >> v;
        if (is.fail()) bad(F, "malformed " + key + " entry '" + line + "'");
        c.v = v;
        if (key == "BCOORD") {
          bcoords.emplace_back(c.row, parse_num(F, v));
        } else {
          c.psd = key == "OBJFCOORD" || key == "FCOORD";
          coords.push_back(c);
        }
      }
    } else {
      bad(F, "unknown section '" + key + "'");
    }
  }
  if (!saw_var && psd_sides.empty()) bad(F, "no variables");

  // Block order: recorded order when consistent, else scalars then PSD.
  std::vector<ConeBlock> blocks;
  {
    std::vector<ConeBlock> scalars, psd;
    for (const auto& blk : order) (blk.kind == ConeKind::PSD ? psd : scalars).push_back(blk);
    std::vector<ConeBlock> want_psd;
    for (std::size_t s : psd_sides) want_psd.push_back({ConeKind::PSD, s});
    if (!order.empty() && scalars == scalar_blocks && psd == want_psd) {
      blocks = order;
    } else {
      blocks = scalar_blocks;
      blocks.insert(blocks.end(), want_psd.begin(), want_psd.end());
    }
  }
  const ConeLayout layout(blocks);
  std::vector<std::size_t> scalar_col(nscalar);
  std::vector<std::size_t> psd_off(psd_sides.size());
  {
    std::size_t s = 0, q = 0;
    for (std::size_t b = 0; b < layout.num_blocks(); ++b) {
      const auto& blk = layout.blocks()[b];
      if (blk.kind == ConeKind::PSD) {
        psd_off[q++] = layout.offset(b);
      } else {
        for (std::size_t k = 0; k < blk.size(); ++k) scalar_col[s++] = layout.offset(b) + k;
      }
    }
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.total_size()));
  Eigen::VectorXd bvec = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  std::vector<Triplet> trips;
  for (const auto& co : coords) {
    std::size_t col = 0;
    double v = 0.0;
    if (co.psd) {
      if (co.index >= psd_sides.size()) bad(F, "PSD variable index out of range");
      const std::size_t side = psd_sides[co.index];
      std::size_t i = co.i, j = co.j;
      if (i < j) std::swap(i, j);
      if (i >= side) bad(F, "PSD entry out of range");
      col = psd_off[co.index] + psd_vec_index(i, j, side);
      v = i != j ? parse_offdiag(F, co.v) : parse_num(F, co.v);
    } else {
      if (co.index >= nscalar) bad(F, "scalar variable index out of range");
      col = scalar_col[co.index];
      v = parse_num(F, co.v);
    }
    if (co.row == kObj) {
      c[static_cast<Eigen::Index>(col)] += v;
    } else {
      if (co.row >= rows) bad(F, "constraint index out of range");
      trips.emplace_back(static_cast<int>(co.row), static_cast<int>(col), v);
    }
  }
  for (const auto& [r, v] : bcoords) {
    if (r >= rows) bad(F, "constraint index out of range");
    bvec[static_cast<Eigen::Index>(r)] = -v;
  }
  return assemble(blocks, rows, trips, c, bvec);
}

ConicProblem from_cbf(const std::string& text) {
  std::istringstream is(text);
  return read_cbf(is);
}

void write_sdpa(const ConicProblem& p, std::ostream& out, const SdpaOptions& options) {
  p.validate();
  // Each conic column becomes a combination of SDPA block entries.
  struct Slot {
    std::size_t block;
    std::size_t i, j;  // 0-based, i <= j
    double w;          // column value = sum w * Y_ij
  };
  std::vector<std::vector<Slot>> col_slots(p.num_vars());
  std::vector<long> block_struct;
  for (std::size_t b = 0; b < p.cones.num_blocks(); ++b) {
    const auto& blk = p.cones.blocks()[b];
    const std::size_t off = p.cones.offset(b);
    switch (blk.kind) {
      case ConeKind::NonNeg: {
        const std::size_t id = block_struct.size();
        block_struct.push_back(-static_cast<long>(blk.dim));
        for (std::size_t k = 0; k < blk.dim; ++k) col_slots[off + k] = {{id, k, k, 1.0}};
        break;
      }
      case ConeKind::PSD: {
        const std::size_t id = block_struct.size();
        block_struct.push_back(static_cast<long>(blk.dim));
        for (std::size_t j = 0; j < blk.dim; ++j) {
          for (std::size_t i = j; i < blk.dim; ++i) {
            // vec entry = sqrt(2) Y_ij off the diagonal.
            col_slots[off + psd_vec_index(i, j, blk.dim)] = {{id, j, i, i == j ? 1.0 : std::numbers::sqrt2}};
          }
        }
        break;
      }
      case ConeKind::SecondOrder:
        if (!options.rewrite || blk.dim != 3) {
          throw std::invalid_argument(options.rewrite ? "SDPA: only 3-dimensional second-order blocks can be rewritten"
                                                      : "SDPA: second-order block needs the rewrite option");
        } else {
          // t = (Y11 + Y22) / 2, u = (Y11 - Y22) / 2, v = Y12.
          const std::size_t id = block_struct.size();
          block_struct.push_back(2);
          col_slots[off] = {{id, 0, 0, 0.5}, {id, 1, 1, 0.5}};
          col_slots[off + 1] = {{id, 0, 0, 0.5}, {id, 1, 1, -0.5}};
          col_slots[off + 2] = {{id, 0, 1, 1.0}};
        }
        break;
      case ConeKind::Free:
        if (!options.rewrite) throw std::invalid_argument("SDPA: free block needs the rewrite option");
        {
          const std::size_t id = block_struct.size();
          block_struct.push_back(-2 * static_cast<long>(blk.dim));
          for (std::size_t k = 0; k < blk.dim; ++k) {
            col_slots[off + k] = {{id, 2 * k, 2 * k, 1.0}, {id, 2 * k + 1, 2 * k + 1, -1.0}};
          }
        }
        break;
      case ConeKind::Zero: throw std::invalid_argument("SDPA: zero blocks are not supported");
    }
  }
  // <F, Y> with F symmetric counts an off-diagonal entry twice.
  auto coeff = [](const Slot& s, double a) { return s.i == s.j ? a * s.w : a * s.w / 2.0; };
  // Key (matno, block, i, j) in sorted order for reproducible output.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, long double> entries;
  auto add = [&](std::size_t mat, std::size_t col, double a) {
    for (const auto& s : col_slots[col]) {
      if (s.w == std::numbers::sqrt2) {
        entries[{mat, s.block, s.i, s.j}] += offdiag(a);
      } else {
        entries[{mat, s.block, s.i, s.j}] += coeff(s, a);
      }
    }
  };
  for (Eigen::Index j = 0; j < p.c.size(); ++j) {
    if (p.c[j] != 0.0) add(0, static_cast<std::size_t>(j), -p.c[j]);
  }
  for (Eigen::Index j = 0; j < p.A.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(p.A, j); it; ++it) {
      if (it.value() != 0.0) add(static_cast<std::size_t>(it.row()) + 1, static_cast<std::size_t>(j), it.value());
    }
  }
  out << "\"bdcone conic problem: max <F0,Y> s.t. <Fi,Y> = ci\n";
  out << p.num_rows() << '\n' << block_struct.size() << '\n';
  for (std::size_t k = 0; k < block_struct.size(); ++k) out << (k ? " " : "") << block_struct[k];
  out << '\n';
  for (Eigen::Index r = 0; r < p.b.size(); ++r) out << (r ? " " : "") << num(p.b[r]);
  out << '\n';
  for (const auto& [key, v] : entries) {
    if (v == 0.0L) continue;
    const auto& [mat, blk, i, j] = key;
    out << mat << ' ' << blk + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << num(v) << '\n';
  }
}

std::string to_sdpa(const ConicProblem& p, const SdpaOptions& options) {
  std::ostringstream os;
  write_sdpa(p, os, options);
  return os.str();
}

ConicProblem read_sdpa(std::istream& in) {
  const std::string F = "SDPA";
  std::string line;
  auto need = [&](const char* what) {
    if (!next_line(in, line, "\"*")) bad(F, std::string("missing ") + what);
  };
  // Header fields may share lines and use separators ",(){}".
  std::vector<std::string> header;
  auto header_tokens = [&](std::size_t count, const char* what) {
    while (header.size() < count) {
      need(what);
      for (char& ch : line) {
        if (std::string_view(",(){}").find(ch) != std::string_view::npos) ch = ' ';
      }
      std::istringstream is(line);
      std::string t;
      while (is >> t) header.push_back(t);
    }
  };
  header_tokens(2, "header");
  const auto m = static_cast<std::size_t>(parse_num(F, header[0]));
  const auto nblocks = static_cast<std::size_t>(parse_num(F, header[1]));
  header_tokens(2 + nblocks + m, "block structure and objective");
  if (header.size() != 2 + nblocks + m) bad(F, "unexpected header length");
  std::vector<ConeBlock> blocks;
  std::vector<std::size_t> offsets;
  std::size_t total = 0;
  for (std::size_t k = 0; k < nblocks; ++k) {
    const long s = static_cast<long>(parse_num(F, header[2 + k]));
    if (s == 0) bad(F, "zero block size");
    const ConeBlock blk = s < 0 ? ConeBlock{ConeKind::NonNeg, static_cast<std::size_t>(-s)}
                                : ConeBlock{ConeKind::PSD, static_cast<std::size_t>(s)};
    blocks.push_back(blk);
    offsets.push_back(total);
    total += blk.size();
  }
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) b[static_cast<Eigen::Index>(r)] = parse_num(F, header[2 + nblocks + r]);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  std::vector<Triplet> trips;
  while (next_line(in, line, "\"*")) {
    std::size_t mat = 0, blk = 0, i = 0, j = 0;
    std::string v;
    read_fields(F, line, mat, blk, i, j, v);
    if (mat > m || blk == 0 || blk > nblocks || i == 0 || j == 0) bad(F, "entry out of range '" + line + "'");
    const auto& cb = blocks[blk - 1];
    if (i > j) std::swap(i, j);
    if (j > cb.dim) bad(F, "entry out of range '" + line + "'");
    std::size_t col = offsets[blk - 1];
    double val = 0.0;
    if (cb.kind == ConeKind::NonNeg) {
      if (i != j) bad(F, "off-diagonal entry in a diagonal block");
      col += i - 1;
      val = parse_num(F, v);
    } else {
      col += psd_vec_index(j - 1, i - 1, cb.dim);
      val = i != j ? parse_offdiag(F, v) : parse_num(F, v);
    }
    if (mat == 0) {
      c[static_cast<Eigen::Index>(col)] -= val;
    } else {
      trips.emplace_back(static_cast<int>(mat - 1), static_cast<int>(col), val);
    }
  }
  return assemble(blocks, m, trips, c, b);
}

ConicProblem from_sdpa(const std::string& text) {
  std::istringstream is(text);
  return read_sdpa(is);
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string load_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace bdcone
