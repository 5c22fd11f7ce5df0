#include "symtuck/stream.hpp"

#include <vector>

namespace symtuck {

SampleBatch SampleStream::next(Index width) {
  if (width < 1) throw ShapeError("batch width must be positive");
  Matrix data = take(width);
  if (!data.allFinite()) throw NumericalError("sample batch contains non-finite entries");
  SampleBatch batch{std::move(data), issued_};
  ++issued_;
  return batch;
}

PoolStream::PoolStream(Matrix pool, Index default_width)
    : pool_(std::move(pool)), default_width_(default_width) {
  if (pool_.cols() < 1) throw ShapeError("pool has no samples");
  if (default_width_ < 1 || default_width_ > pool_.cols())
    throw ShapeError("batch width must lie in [1, pool size]");
}

Index PoolStream::remaining(Index width) const {
  if (width < 1) throw ShapeError("batch width must be positive");
  return (pool_.cols() - cursor_) / width;
}

Matrix PoolStream::take(Index width) {
  if (cursor_ + width > pool_.cols())
    throw StreamUnderrunError("sample pool exhausted before the requested batch");
  Matrix block = pool_.middleCols(cursor_, width);
  cursor_ += width;
  return block;
}

PoolStream stream_from_pool(Matrix pool, Index width) {
  return PoolStream(std::move(pool), width);
}

FactorModelStream::FactorModelStream(FactorModel model)
    : model_(std::move(model)), rng_(model_.seed) {}

Matrix FactorModelStream::take(Index width) {
  return sample_factor_model(model_, width, rng_);
}

BinaryFileStream::BinaryFileStream(const std::string& path)
    : file_(path, std::ios::binary) {
  if (!file_) throw IoError("cannot open sample file: " + path);
  std::uint64_t header[2];
  file_.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!file_) throw IoError("truncated binary sample header: " + path);
  n_ = static_cast<Index>(header[0]);
  p_ = static_cast<Index>(header[1]);
  if (n_ < 1 || p_ < 1) throw IoError("invalid binary sample header: " + path);
}

Index BinaryFileStream::remaining(Index width) const {
  if (width < 1) throw ShapeError("batch width must be positive");
  return (p_ - cursor_) / width;
}

Matrix BinaryFileStream::take(Index width) {
  if (cursor_ + width > p_)
    throw StreamUnderrunError("sample file exhausted before the requested batch");
  Matrix block(n_, width);
  file_.read(reinterpret_cast<char*>(block.data()),
             static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(n_ * width)));
  if (!file_) throw IoError("truncated binary sample payload");
  cursor_ += width;
  return block;
}

}  // namespace symtuck
