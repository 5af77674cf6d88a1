#include "entreg/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace entreg {

namespace {

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

class Tokenizer {
 public:
  explicit Tokenizer(const std::string& src) : src_(src) {}

  bool next(Token& out) {
    skip_space_and_comments();
    if (pos_ >= src_.size()) return false;
    out.line = line_;
    out.col = col_;
    out.text.clear();
    while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) &&
           src_[pos_] != '#') {
      out.text.push_back(src_[pos_]);
      advance();
    }
    return true;
  }

  Token expect(const std::string& what) {
    Token t;
    if (!next(t)) throw ParseError(line_, col_, "unexpected end of input, expected " + what);
    return t;
  }

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

double parse_double(const Token& t) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.text.c_str(), &end);
  if (end != t.text.c_str() + t.text.size() || t.text.empty())
    throw ParseError(t.line, t.col, "expected a number, got '" + t.text + "'");
  if (!std::isfinite(v))
    throw ParseError(t.line, t.col, "non-finite literal '" + t.text + "'");
  return v;
}

int parse_positive_int(const Token& t, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(t.text.c_str(), &end, 10);
  if (end != t.text.c_str() + t.text.size() || t.text.empty() || v < 1 || v > 1000000)
    throw ParseError(t.line, t.col, "expected a positive integer for " + what + ", got '" + t.text + "'");
  return static_cast<int>(v);
}

VectorXd parse_vector(Tokenizer& tok, int n, const std::string& what) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = parse_double(tok.expect(what));
  return v;
}

MatrixXd parse_matrix(Tokenizer& tok, int rows, int cols, const std::string& what) {
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = parse_double(tok.expect(what));
  return m;
}

void expect_end(Tokenizer& tok) {
  Token t;
  if (tok.next(t))
    throw ParseError(t.line, t.col, "unexpected trailing content '" + t.text + "'");
}

ParsedInstance parse_lp(Tokenizer& tok, const Token& header) {
  const int d = parse_positive_int(tok.expect("num_vars"), "num_vars");
  const int m = parse_positive_int(tok.expect("num_cons"), "num_cons");
  VectorXd c = parse_vector(tok, d, "cost entry");
  MatrixXd a = parse_matrix(tok, m, d, "constraint entry");
  VectorXd b = parse_vector(tok, m, "rhs entry");
  expect_end(tok);
  try {
    return LpInstance(std::move(a), std::move(b), std::move(c));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(header.line, header.col, ex.what());
  }
}

ParsedInstance parse_sdp(Tokenizer& tok, const Token& header) {
  const int n = parse_positive_int(tok.expect("dim"), "dim");
  const int m = parse_positive_int(tok.expect("num_cons"), "num_cons");

  auto check_block_symmetry = [&](const MatrixXd& mat, int block_line, const std::string& name) {
    const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
    if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ParseError(block_line, 1,
                       name + " block starting at line " + std::to_string(block_line) +
                           " is not symmetric within tolerance");
  };

  int block_line = tok.line();
  MatrixXd c = parse_matrix(tok, n, n, "cost entry");
  check_block_symmetry(c, block_line, "cost matrix");

  std::vector<MatrixXd> cons;
  cons.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    block_line = tok.line();
    cons.push_back(parse_matrix(tok, n, n, "constraint entry"));
    check_block_symmetry(cons.back(), block_line, "constraint matrix " + std::to_string(k + 1));
  }
  VectorXd b = parse_vector(tok, m, "rhs entry");
  expect_end(tok);
  try {
    return SdpInstance(std::move(c), std::move(cons), std::move(b));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(header.line, header.col, ex.what());
  }
}

ParsedInstance parse_ot(Tokenizer& tok, const Token& header) {
  const int n1 = parse_positive_int(tok.expect("rows"), "rows");
  const int n2 = parse_positive_int(tok.expect("cols"), "cols");
  MatrixXd cost = parse_matrix(tok, n1, n2, "cost entry");
  VectorXd p = parse_vector(tok, n1, "source entry");
  VectorXd q = parse_vector(tok, n2, "target entry");
  expect_end(tok);
  try {
    return OtInstance(std::move(cost), std::move(p), std::move(q));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(header.line, header.col, ex.what());
  }
}

void append_vector(std::string& out, const VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_number(v[i]);
  }
  out += '\n';
}

void append_matrix(std::string& out, const MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ParsedInstance parse_instance(const std::string& text) {
  Tokenizer tok(text);
  const Token header = tok.expect("instance header (LP, SDP, or OT)");
  if (header.text == "LP") return parse_lp(tok, header);
  if (header.text == "SDP") return parse_sdp(tok, header);
  if (header.text == "OT") return parse_ot(tok, header);
  throw ParseError(header.line, header.col,
                   "malformed header '" + header.text + "', expected LP, SDP, or OT");
}

ParsedInstance parse_instance_file(const std::string& path) {
  return parse_instance(read_text_file(path));
}

std::string serialize(const LpInstance& inst) {
  std::string out = "LP\n";
  out += std::to_string(inst.num_vars()) + " " + std::to_string(inst.num_cons()) + "\n";
  append_vector(out, inst.cost());
  append_matrix(out, inst.con_matrix());
  append_vector(out, inst.rhs());
  return out;
}

std::string serialize(const SdpInstance& inst) {
  std::string out = "SDP\n";
  out += std::to_string(inst.dim()) + " " + std::to_string(inst.num_cons()) + "\n";
  append_matrix(out, inst.cost().mat());
  for (const SymMatrix& a : inst.con_matrices()) append_matrix(out, a.mat());
  append_vector(out, inst.rhs());
  return out;
}

std::string serialize(const OtInstance& inst) {
  std::string out = "OT\n";
  out += std::to_string(inst.rows()) + " " + std::to_string(inst.cols()) + "\n";
  append_matrix(out, inst.cost());
  append_vector(out, inst.source());
  append_vector(out, inst.target());
  return out;
}

std::string serialize(const ParsedInstance& inst) {
  return std::visit([](const auto& i) { return serialize(i); }, inst);
}

void ReportWriter::scalar(const std::string& key, double v) { items_.push_back({key, format_number(v), false}); }
void ReportWriter::scalar(const std::string& key, int v) { items_.push_back({key, std::to_string(v), false}); }
void ReportWriter::scalar(const std::string& key, bool v) { items_.push_back({key, v ? "true" : "false", false}); }
void ReportWriter::scalar(const std::string& key, const std::string& v) { items_.push_back({key, v, false}); }

void ReportWriter::vector_block(const std::string& name, const VectorXd& v) {
  std::string body;
  append_vector(body, v);
  items_.push_back({name, std::move(body), true});
}

void ReportWriter::matrix_block(const std::string& name, const MatrixXd& m) {
  std::string body;
  append_matrix(body, m);
  items_.push_back({name, std::move(body), true});
}

void ReportWriter::blank() { items_.push_back({"", "", false}); }

std::string ReportWriter::str(const std::string& format) const {
  const bool text = format == "text";
  if (!text && format != "keyvalue")
    throw std::invalid_argument("ReportWriter: format must be 'text' or 'keyvalue'");
  std::string out;
  for (const Item& item : items_) {
    if (item.key.empty() && !item.is_block) {
      out += '\n';
    } else if (!item.is_block) {
      out += text ? "  " + item.key + " = " + item.value + "\n"
                  : item.key + " = " + item.value + "\n";
    } else {
      out += text ? item.key + ":\n" : item.key + "\n";
      out += item.value;
    }
  }
  return out;
}

void append_solve_report(ReportWriter& w, const SolveReport& rep, const std::string& kind) {
  w.scalar("problem", kind);
  w.scalar("epsilon", rep.epsilon);
  w.scalar("converged", rep.converged);
  w.scalar("iterations", rep.iterations);
  w.scalar("dual_value", rep.dual_value);
  w.scalar("primal_value", rep.primal_value);
  w.scalar("grad_inf_norm", rep.grad_inf_norm);
  w.scalar("duality_gap", rep.primal_value - rep.dual_value);
  if (!rep.note.empty()) w.scalar("note", rep.note);
  if (rep.dual_opt.size() > 0) w.vector_block("lambda", rep.dual_opt);
  if (const VectorXd* x = std::get_if<VectorXd>(&rep.primal_point); x && x->size() > 0)
    w.vector_block("primal", *x);
  else if (const SymMatrix* xm = std::get_if<SymMatrix>(&rep.primal_point))
    w.matrix_block("primal", xm->mat());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f.good()) throw std::runtime_error("error while writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace entreg
