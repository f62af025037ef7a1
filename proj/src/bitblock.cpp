#include "certamp/bitblock.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace certamp {

namespace {
constexpr char kMagic[4] = {'C', 'A', 'B', 'B'};
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::weak_source: return "weak-source";
    case Provenance::quantum: return "quantum";
    case Provenance::extracted: return "extracted";
    default: return "other";
  }
}

BitBlock::BitBlock(std::size_t nbits, Provenance tag) : nbits_(nbits), words_((nbits + 63) / 64, 0), tag_(tag) {}

void BitBlock::clear_tail() {
  if (nbits_ & 63) words_.back() &= (std::uint64_t{1} << (nbits_ & 63)) - 1;
}

void BitBlock::resize(std::size_t nbits) {
  nbits_ = nbits;
  words_.resize((nbits + 63) / 64, 0);
  clear_tail();
}

void BitBlock::push_bits(std::uint64_t value, unsigned count) {
  if (count == 0) return;
  if (count < 64) value &= (std::uint64_t{1} << count) - 1;
  std::size_t off = nbits_;
  resize(nbits_ + count);
  std::size_t w = off >> 6, s = off & 63;
  words_[w] |= value << s;
  if (s && s + count > 64) words_[w + 1] |= value >> (64 - s);
}

void BitBlock::append(const BitBlock& other) {
  std::size_t full = other.nbits_ / 64;
  for (std::size_t i = 0; i < full; ++i) push_bits(other.words_[i], 64);
  if (other.nbits_ & 63) push_bits(other.words_[full], unsigned(other.nbits_ & 63));
}

BitBlock BitBlock::slice(std::size_t offset, std::size_t len) const {
  if (offset + len > nbits_) throw std::out_of_range("BitBlock::slice");
  BitBlock out(0, tag_);
  std::size_t done = 0;
  while (done < len) {
    std::size_t pos = offset + done, w = pos >> 6, s = pos & 63;
    std::uint64_t v = words_[w] >> s;
    if (s && w + 1 < words_.size()) v |= words_[w + 1] << (64 - s);
    unsigned take = unsigned(std::min<std::size_t>(64, len - done));
    out.push_bits(v, take);
    done += take;
  }
  return out;
}

BitBlock& BitBlock::operator^=(const BitBlock& o) {
  if (o.nbits_ != nbits_) throw std::invalid_argument("BitBlock xor: length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

std::size_t BitBlock::popcount() const {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::string BitBlock::to_string() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

void BitBlock::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  auto tag = static_cast<std::uint32_t>(tag_);
  std::uint64_t len = nbits_;
  f.write(kMagic, 4);
  f.write(reinterpret_cast<const char*>(&tag), 4);
  f.write(reinterpret_cast<const char*>(&len), 8);
  f.write(reinterpret_cast<const char*>(words_.data()), std::streamsize(words_.size() * 8));
}

BitBlock BitBlock::read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t tag;
  std::uint64_t len;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&tag), 4);
  f.read(reinterpret_cast<char*>(&len), 8);
  if (!f || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("bad bit block header in " + path);
  BitBlock b(len, static_cast<Provenance>(tag));
  f.read(reinterpret_cast<char*>(b.words_.data()), std::streamsize(b.words_.size() * 8));
  if (!f) throw std::runtime_error("truncated bit block " + path);
  b.clear_tail();
  return b;
}

}  // namespace certamp
