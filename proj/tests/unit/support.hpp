#ifndef BKNN_TESTS_SUPPORT_HPP
#define BKNN_TESTS_SUPPORT_HPP

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bknn/rng.hpp"
#include "bknn/types.hpp"

namespace bknn::test {

inline LabeledDataset dataset(std::vector<Point2> pts, std::vector<int> labels) {
  return LabeledDataset(std::move(pts), std::move(labels), 2);
}

// Uniform points on [-1, 1]^2, fair labels. Not guaranteed two-class.
inline LabeledDataset random_dataset(std::size_t n, Rng &rng) {
  std::vector<Point2> pts(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    labels[i] = static_cast<int>(rng.below(2));
  }
  return dataset(std::move(pts), std::move(labels));
}

// Two tight clusters: class 0 around (-center, 0), class 1 around (center, 0).
inline LabeledDataset separated_clusters(std::size_t per_class, Rng &rng,
                                         double center = 5.0,
                                         double spread = 0.1) {
  std::vector<Point2> pts;
  std::vector<int> labels;
  for (int q = 0; q < 2; ++q)
    for (std::size_t i = 0; i < per_class; ++i) {
      const double cx = q == 0 ? -center : center;
      pts.push_back({cx + spread * rng.normal(), spread * rng.normal()});
      labels.push_back(q);
    }
  return dataset(std::move(pts), std::move(labels));
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string &tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("bknn_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace bknn::test

#endif
