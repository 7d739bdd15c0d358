#include "dgsmlab/external_model.hpp"

#include <fcntl.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "dgsmlab/error.hpp"

namespace dgsmlab {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Scratch directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<unsigned long> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dgsmlab-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

class ExternalModel final : public Model {
 public:
  ExternalModel(std::string command, std::filesystem::path workdir, std::size_t dimension,
                std::string name)
      : command_(std::move(command)),
        workdir_(std::move(workdir)),
        dimension_(dimension),
        name_(std::move(name)) {
    if (command_.empty()) throw DomainError("external model: empty command");
    if (dimension_ == 0) throw DomainError("external model: dimension must be positive");
  }

  const std::string& name() const override { return name_; }
  std::size_t dimension() const override { return dimension_; }

  double evaluate(std::span<const double> x) const override {
    Matrix one(1, x.size());
    std::copy(x.begin(), x.end(), one.row(0).begin());
    return run_batch(one, 0, 1).front();
  }

  std::vector<double> evaluate_rows(const Matrix& x, std::size_t workers) const override {
    if (x.cols() != dimension_) {
      throw ShapeError("external model expects " + std::to_string(dimension_) + " inputs, got " +
                       std::to_string(x.cols()));
    }
    const std::size_t n = x.rows();
    if (n == 0) return {};
    workers = std::clamp<std::size_t>(workers, 1, n);
    std::vector<double> y(n);
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
          try {
            const auto part = run_batch(x, begin, end);
            std::copy(part.begin(), part.end(), y.begin() + static_cast<std::ptrdiff_t>(begin));
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return y;
  }

 private:
  std::vector<double> run_batch(const Matrix& x, std::size_t begin, std::size_t end) const {
    ScratchDir scratch;
    const auto in_path = scratch.path() / "input.csv";
    const auto out_path = scratch.path() / "output.txt";
    const auto err_path = scratch.path() / "stderr.txt";
    {
      std::ofstream in(in_path, std::ios::binary);
      char buf[64];
      for (std::size_t i = begin; i < end; ++i) {
        const auto row = x.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
          if (j) in.put(',');
          const auto res = std::to_chars(buf, buf + sizeof buf, row[j],
                                         std::chars_format::general, 17);
          in.write(buf, res.ptr - buf);
        }
        in.put('\n');
      }
      if (!in) throw EvaluationError("external model: cannot write " + in_path.string());
    }

    const int status = spawn(in_path, out_path, err_path);
    const std::string diagnostics = read_file(err_path);
    if (status != 0) {
      throw EvaluationError("external model '" + command_ + "' exited with status " +
                                std::to_string(status),
                            diagnostics);
    }

    std::vector<double> y;
    y.reserve(end - begin);
    std::istringstream out(read_file(out_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(out, line)) {
      ++line_no;
      const std::string field = trim(line);
      if (field.empty()) continue;
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw EvaluationError("external model: malformed output line " + std::to_string(line_no) +
                                  ": '" + field + "'",
                              diagnostics);
      }
      if (!std::isfinite(v)) {
        throw EvaluationError("external model: non-finite output on line " +
                                  std::to_string(line_no) + ": '" + field + "'",
                              diagnostics);
      }
      y.push_back(v);
    }
    if (y.size() != end - begin) {
      throw EvaluationError("external model: row-count mismatch, sent " +
                                std::to_string(end - begin) + " rows, received " +
                                std::to_string(y.size()),
                            diagnostics);
    }
    return y;
  }

  int spawn(const std::filesystem::path& in, const std::filesystem::path& out,
            const std::filesystem::path& err) const {
    const std::string workdir = workdir_.empty() ? std::string(".") : workdir_.string();
    const pid_t pid = ::fork();
    if (pid < 0) throw EvaluationError("external model: fork failed");
    if (pid == 0) {
      // Only async-signal-safe calls between fork and exec.
      const int fin = ::open(in.c_str(), O_RDONLY);
      const int fout = ::open(out.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
      const int ferr = ::open(err.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
      if (fin < 0 || fout < 0 || ferr < 0) ::_exit(127);
      if (::dup2(fin, 0) < 0 || ::dup2(fout, 1) < 0 || ::dup2(ferr, 2) < 0) ::_exit(127);
      if (::chdir(workdir.c_str()) != 0) ::_exit(127);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    int wstatus = 0;
    while (::waitpid(pid, &wstatus, 0) < 0) {
      if (errno != EINTR) throw EvaluationError("external model: waitpid failed");
    }
    if (WIFEXITED(wstatus)) return WEXITSTATUS(wstatus);
    return 128 + (WIFSIGNALED(wstatus) ? WTERMSIG(wstatus) : 0);
  }

  std::string command_;
  std::filesystem::path workdir_;
  std::size_t dimension_;
  std::string name_;
};

}  // namespace

ModelPtr external_model(std::string command, std::filesystem::path workdir, std::size_t dimension,
                        std::string name) {
  return std::make_shared<ExternalModel>(std::move(command), std::move(workdir), dimension,
                                         std::move(name));
}

}  // namespace dgsmlab
