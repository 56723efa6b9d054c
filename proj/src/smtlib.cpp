// SPDX-License-Identifier: Apache-2.0
#include "smtlib.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "errors.hpp"
#include "lowdisc.hpp"

namespace petc::smt {

namespace {

// Little-endian decimal digit vector arithmetic, enough to expand a binary
// fraction exactly in base 10.
void mul_small(std::vector<int>& digits, int f) {
  int carry = 0;
  for (auto& d : digits) {
    const int v = d * f + carry;
    d = v % 10;
    carry = v / 10;
  }
  while (carry) {
    digits.push_back(carry % 10);
    carry /= 10;
  }
}

std::string digits_to_decimal(std::vector<int> digits, int frac_digits) {
  while (static_cast<int>(digits.size()) <= frac_digits) digits.push_back(0);
  std::string s;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it)
    s.push_back(static_cast<char>('0' + *it));
  if (frac_digits == 0) return s + ".0";
  s.insert(s.size() - static_cast<std::size_t>(frac_digits), ".");
  // trim trailing zeros but keep one fractional digit
  while (s.size() > 2 && s.back() == '0' && s[s.size() - 2] != '.')
    s.pop_back();
  return s;
}

}  // namespace

std::string real_literal(double v) {
  if (!std::isfinite(v)) throw NumericError("real_literal: non-finite value");
  if (v == 0.0) return "0.0";
  const bool neg = v < 0.0;
  const double m = std::abs(v);
  int e = 0;
  const double frac = std::frexp(m, &e);  // m = frac * 2^e, frac in [0.5, 1)
  auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  int shift = e - 53;  // m = mant * 2^shift
  std::vector<int> digits;
  for (std::uint64_t t = mant; t; t /= 10)
    digits.push_back(static_cast<int>(t % 10));
  int frac_digits = 0;
  for (; shift > 0; --shift) mul_small(digits, 2);
  for (; shift < 0; ++shift) {
    mul_small(digits, 5);
    ++frac_digits;  // dividing by 2 == *5 then /10
  }
  const std::string body = digits_to_decimal(std::move(digits), frac_digits);
  return neg ? "(- " + body + ")" : body;
}

namespace {

std::string poly_expr(const linalg::Matrix& p) {
  std::ostringstream os;
  os << "(+";
  const auto n = p.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    os << " (* " << real_literal(p(i, i)) << " x_" << (i + 1) << " x_"
       << (i + 1) << ")";
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double c = p(i, j) + p(j, i);
      if (c != 0.0)
        os << " (* " << real_literal(c) << " x_" << (i + 1) << " x_"
           << (j + 1) << ")";
    }
  os << ")";
  return os.str();
}

}  // namespace

std::string emit_script(const ConeConjunction& c, bool request_model) {
  std::ostringstream os;
  os << "(set-logic QF_NRA)\n";
  for (int i = 1; i <= c.dim; ++i)
    os << "(declare-const x_" << i << " Real)\n";
  for (const auto& p : c.strict_pos)
    os << "(assert (> " << poly_expr(p) << " 0))\n";
  for (const auto& p : c.nonpos)
    os << "(assert (<= " << poly_expr(p) << " 0))\n";
  os << "(assert (= (+";
  for (int i = 1; i <= c.dim; ++i) os << " (* x_" << i << " x_" << i << ")";
  os << ") 1))\n";
  os << "(check-sat)\n";
  if (request_model) os << "(get-model)\n";
  return os.str();
}

SolverRun run_solver(const std::string& command, const std::string& script,
                     double timeout_s) {
  SolverRun run;
  char path[] = "/tmp/petcmaist_smt_XXXXXX";
  const int sfd = mkstemp(path);
  if (sfd < 0) throw SolverError("run_solver: cannot create temp file");
  const ssize_t wr = write(sfd, script.data(), script.size());
  close(sfd);
  if (wr != static_cast<ssize_t>(script.size())) {
    unlink(path);
    throw SolverError("run_solver: cannot write script");
  }

  int fds[2];
  if (pipe(fds) != 0) {
    unlink(path);
    throw SolverError("run_solver: pipe failed");
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    unlink(path);
    throw SolverError("run_solver: fork failed");
  }
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    const std::string cmdline = command + " " + path;
    execl("/bin/sh", "sh", "-c", cmdline.c_str(), nullptr);
    _exit(127);
  }
  close(fds[1]);
  run.started = true;

  const auto deadline_ms = static_cast<long>(timeout_s * 1000.0);
  long elapsed_ms = 0;
  char buf[4096];
  bool open_pipe = true;
  while (open_pipe) {
    pollfd pfd{fds[0], POLLIN, 0};
    const int step = 50;
    const int rc = poll(&pfd, 1, step);
    if (rc > 0) {
      const ssize_t got = read(fds[0], buf, sizeof buf);
      if (got > 0)
        run.output.append(buf, static_cast<std::size_t>(got));
      else
        open_pipe = false;
    } else {
      elapsed_ms += step;
      if (deadline_ms > 0 && elapsed_ms >= deadline_ms) {
        kill(pid, SIGKILL);
        run.timed_out = true;
        open_pipe = false;
      }
    }
  }
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  unlink(path);
  return run;
}

std::optional<FeasStatus> parse_status(const std::string& solver_output) {
  std::istringstream is(solver_output);
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const std::string t = line.substr(b);
    if (t == "sat") return FeasStatus::Sat;
    if (t == "unsat") return FeasStatus::Unsat;
    if (t == "unknown") return FeasStatus::Unknown;
  }
  return std::nullopt;
}

namespace {

struct Tokens {
  std::vector<std::string> toks;
  std::size_t pos = 0;
  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const { return toks[pos]; }
  std::string next() { return toks[pos++]; }
};

Tokens tokenize(const std::string& s) {
  Tokens t;
  std::string cur;
  for (const char ch : s) {
    if (ch == '(' || ch == ')') {
      if (!cur.empty()) {
        t.toks.push_back(cur);
        cur.clear();
      }
      t.toks.push_back(std::string(1, ch));
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) {
        t.toks.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) t.toks.push_back(cur);
  return t;
}

bool parse_number(const std::string& tok, double* out) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') return false;
  *out = v;
  return true;
}

// numeral | decimal | (- e) | (/ a b)
bool parse_value(Tokens& t, double* out) {
  if (t.done()) return false;
  if (t.peek() != "(") return parse_number(t.next(), out);
  t.next();  // (
  if (t.done()) return false;
  const std::string op = t.next();
  if (op == "-") {
    double inner = 0;
    if (!parse_value(t, &inner)) return false;
    if (t.done() || t.next() != ")") return false;
    *out = -inner;
    return true;
  }
  if (op == "/") {
    double a = 0, b = 0;
    if (!parse_value(t, &a) || !parse_value(t, &b)) return false;
    if (t.done() || t.next() != ")" || b == 0.0) return false;
    *out = a / b;
    return true;
  }
  return false;
}

void skip_sexpr(Tokens& t) {
  if (t.done()) return;
  if (t.peek() != "(") {
    t.next();
    return;
  }
  int depth = 0;
  while (!t.done()) {
    const std::string tok = t.next();
    if (tok == "(") ++depth;
    if (tok == ")" && --depth == 0) break;
  }
}

}  // namespace

std::optional<linalg::Vector> parse_model(const std::string& solver_output,
                                          int dim) {
  Tokens t = tokenize(solver_output);
  linalg::Vector x = linalg::Vector::Zero(dim);
  std::vector<bool> have(static_cast<std::size_t>(dim), false);
  while (!t.done()) {
    if (t.next() != "define-fun") continue;
    if (t.done()) break;
    const std::string name = t.next();
    if (name.size() < 3 || name.compare(0, 2, "x_") != 0) continue;
    int idx = 0;
    try {
      idx = std::stoi(name.substr(2));
    } catch (...) {
      continue;
    }
    // skip argument list and sort
    if (!t.done() && t.peek() == "(") skip_sexpr(t);
    if (!t.done() && t.peek() != "(") t.next();  // "Real"
    double v = 0;
    if (!parse_value(t, &v)) return std::nullopt;  // e.g. root-obj
    if (idx >= 1 && idx <= dim) {
      x(idx - 1) = v;
      have[static_cast<std::size_t>(idx - 1)] = true;
    }
  }
  for (const bool h : have)
    if (!h) return std::nullopt;
  return x;
}

FeasibilityVerdict check_smtlib(const ConeConjunction& c,
                                const FeasibilityOptions& opts) {
  FeasibilityVerdict v;
  v.backend = "smtlib";
  std::string command = opts.solver_command;
  if (const char* env = std::getenv("PETC_SMT_SOLVER"); env && *env)
    command = env;
  if (command.empty())
    throw ConfigError("smtlib backend: no solver command configured");

  const std::string script = emit_script(c, /*request_model=*/true);
  SolverRun run;
  try {
    run = run_solver(command, script, opts.solver_timeout_s);
  } catch (const SolverError& e) {
    v.status = FeasStatus::Unknown;
    v.diagnostic = e.what();
    return v;
  }
  if (run.timed_out) {
    v.status = FeasStatus::Unknown;
    v.diagnostic = "solver timed out";
    return v;
  }
  const auto status = parse_status(run.output);
  if (!status) {
    v.status = FeasStatus::Unknown;
    v.diagnostic = "solver produced no sat/unsat/unknown token (exit " +
                   std::to_string(run.exit_code) + ")";
    return v;
  }
  if (*status == FeasStatus::Unsat) {
    v.status = FeasStatus::Unsat;
    return v;
  }
  if (*status == FeasStatus::Unknown) {
    v.status = FeasStatus::Unknown;
    v.diagnostic = "solver returned unknown";
    return v;
  }
  // sat: recover a witness, from the model if it is parseable, otherwise by
  // sampling.  Without a validated witness the verdict degrades to Unknown,
  // which downstream treats as feasible anyway.
  if (auto model = parse_model(run.output, c.dim)) {
    if (validate_witness(c, *model, opts.margin_tol)) {
      v.status = FeasStatus::Sat;
      v.witness = model->normalized();
      return v;
    }
  }
  FeasibilityOptions fallback = opts;
  fallback.backend = BackendChoice::SphereSampling;
  FeasibilityVerdict s = check(c, fallback);
  if (s.status == FeasStatus::Sat) {
    s.backend = "smtlib+sampled-witness";
    return s;
  }
  v.status = FeasStatus::Unknown;
  v.diagnostic = "solver reported sat but witness recovery failed";
  return v;
}

}  // namespace petc::smt
