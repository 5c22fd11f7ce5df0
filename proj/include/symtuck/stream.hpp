#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <string>

#include "symtuck/moments.hpp"
#include "symtuck/types.hpp"

namespace symtuck {

struct SampleBatch {
  Matrix data;  // n x b, columns are observations
  int index = 0;
};

// Turnstile sample source: batches are handed out once, in order, and
// cannot be replayed. Single consumer.
class SampleStream {
 public:
  virtual ~SampleStream() = default;

  virtual Index dim() const = 0;

  // Full batches of the given width still available; -1 when unbounded.
  virtual Index remaining(Index width) const = 0;

  // Consumes the next `width` observations. Throws StreamUnderrunError when
  // fewer remain (a trailing partial batch is dropped, never padded).
  SampleBatch next(Index width);

 protected:
  virtual Matrix take(Index width) = 0;

 private:
  int issued_ = 0;
};

// Sequential non-overlapping column blocks of an in-memory pool.
class PoolStream final : public SampleStream {
 public:
  PoolStream(Matrix pool, Index default_width);

  Index dim() const override { return pool_.rows(); }
  Index remaining(Index width) const override;
  Index default_width() const { return default_width_; }

 protected:
  Matrix take(Index width) override;

 private:
  Matrix pool_;
  Index default_width_;
  Index cursor_ = 0;
};

PoolStream stream_from_pool(Matrix pool, Index width);

// Draws batches from the synthetic factor model; unbounded.
class FactorModelStream final : public SampleStream {
 public:
  explicit FactorModelStream(FactorModel model);

  Index dim() const override { return model_.dim(); }
  Index remaining(Index) const override { return -1; }

 protected:
  Matrix take(Index width) override;

 private:
  FactorModel model_;
  std::mt19937_64 rng_;
};

// Streams the raw binary sample format (header: two little-endian uint64
// n, p; payload: column-major float64) without loading the file.
class BinaryFileStream final : public SampleStream {
 public:
  explicit BinaryFileStream(const std::string& path);

  Index dim() const override { return n_; }
  Index remaining(Index width) const override;
  Index total_samples() const { return p_; }

 protected:
  Matrix take(Index width) override;

 private:
  std::ifstream file_;
  Index n_ = 0;
  Index p_ = 0;
  Index cursor_ = 0;
};

}  // namespace symtuck
