#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include "tagcorrupt/assign.hpp"
#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {
namespace {

void write_header(char* dst, std::uint64_t rows, std::uint64_t cols) {
  std::memcpy(dst, ScoreMatrix::kMagic, 8);
  std::memcpy(dst + 8, &rows, 8);
  std::memcpy(dst + 16, &cols, 8);
}

}  // namespace

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), heap_(rows * cols, std::numeric_limits<double>::quiet_NaN()) {
  data_ = heap_.data();
}

ScoreMatrix::ScoreMatrix(ScoreMatrix&& other) noexcept { *this = std::move(other); }

ScoreMatrix& ScoreMatrix::operator=(ScoreMatrix&& other) noexcept {
  if (this == &other) return *this;
  if (map_) munmap(map_, map_bytes_);
  rows_ = other.rows_;
  cols_ = other.cols_;
  heap_ = std::move(other.heap_);
  map_ = other.map_;
  map_bytes_ = other.map_bytes_;
  data_ = map_ ? reinterpret_cast<double*>(static_cast<char*>(map_) + kHeaderBytes) : heap_.data();
  other.map_ = nullptr;
  other.data_ = nullptr;
  other.rows_ = other.cols_ = 0;
  return *this;
}

ScoreMatrix::~ScoreMatrix() {
  if (map_) munmap(map_, map_bytes_);
}

ScoreMatrix ScoreMatrix::mapped(const std::string& path, std::size_t rows, std::size_t cols) {
  const std::size_t bytes = kHeaderBytes + rows * cols * sizeof(double);
  const int fd = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
  if (fd < 0) throw IoError("cannot open score cache: " + path);
  struct stat st {};
  fstat(fd, &st);
  const bool fresh = st.st_size == 0;
  if (!fresh && static_cast<std::size_t>(st.st_size) != bytes) {
    ::close(fd);
    throw IoError("score cache has unexpected size: " + path);
  }
  if (fresh && ftruncate(fd, static_cast<off_t>(bytes)) != 0) {
    ::close(fd);
    throw IoError("cannot size score cache: " + path);
  }
  void* map = mmap(nullptr, bytes, PROT_READ | PROT_WRITE, MAP_SHARED, fd, 0);
  ::close(fd);
  if (map == MAP_FAILED) throw IoError("cannot map score cache: " + path);
  ScoreMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.map_ = map;
  m.map_bytes_ = bytes;
  m.data_ = reinterpret_cast<double*>(static_cast<char*>(map) + kHeaderBytes);
  char* base = static_cast<char*>(map);
  if (fresh) {
    write_header(base, rows, cols);
    std::fill(m.data_, m.data_ + rows * cols, std::numeric_limits<double>::quiet_NaN());
  } else {
    std::uint64_t r = 0;
    std::uint64_t c = 0;
    std::memcpy(&r, base + 8, 8);
    std::memcpy(&c, base + 16, 8);
    if (std::memcmp(base, kMagic, 8) != 0 || r != rows || c != cols) {
      throw IoError("score cache header does not match this corpus: " + path);
    }
  }
  return m;
}

ScoreMatrix ScoreMatrix::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open score cache: " + path);
  char header[kHeaderBytes];
  if (!in.read(header, kHeaderBytes) || std::memcmp(header, kMagic, 8) != 0) {
    throw IoError("not a score cache file: " + path);
  }
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::memcpy(&rows, header + 8, 8);
  std::memcpy(&cols, header + 16, 8);
  ScoreMatrix m(rows, cols);
  if (!in.read(reinterpret_cast<char*>(m.data_), static_cast<std::streamsize>(rows * cols * sizeof(double)))) {
    throw IoError("truncated score cache: " + path);
  }
  return m;
}

void ScoreMatrix::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write score cache: " + path);
  char header[kHeaderBytes];
  write_header(header, rows_, cols_);
  out.write(header, kHeaderBytes);
  out.write(reinterpret_cast<const char*>(data_), static_cast<std::streamsize>(rows_ * cols_ * sizeof(double)));
  if (!out) throw IoError("cannot write score cache: " + path);
}

void ScoreMatrix::flush() const {
  if (map_) msync(map_, map_bytes_, MS_SYNC);
}

bool ScoreMatrix::is_scored(std::size_t n, std::size_t t) const { return !std::isnan(at(n, t)); }

}  // namespace tagcorrupt
