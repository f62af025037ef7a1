#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace certamp {

enum class Provenance : std::uint32_t { other = 0, weak_source = 1, quantum = 2, extracted = 3 };

const char* provenance_name(Provenance p);

// Packed bit vector, bit i lives in word i/64 at position i%64.
// Bits past size() in the last word are always zero.
class BitBlock {
 public:
  BitBlock() = default;
  explicit BitBlock(std::size_t nbits, Provenance tag = Provenance::other);

  std::size_t size() const { return nbits_; }
  Provenance tag() const { return tag_; }
  void set_tag(Provenance t) { tag_ = t; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  // Appends the low `count` bits of `value`, LSB first.
  void push_bits(std::uint64_t value, unsigned count);
  void append(const BitBlock& other);
  BitBlock slice(std::size_t offset, std::size_t len) const;
  void resize(std::size_t nbits);

  BitBlock& operator^=(const BitBlock& o);
  friend BitBlock operator^(BitBlock a, const BitBlock& b) { return a ^= b; }
  bool operator==(const BitBlock& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }

  std::size_t popcount() const;
  std::string to_string() const;  // '0'/'1', bit 0 first

  // 16-byte header: magic "CABB", u32 provenance, u64 bit length; then packed words, little-endian.
  void write_file(const std::string& path) const;
  static BitBlock read_file(const std::string& path);

  void clear_tail();

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
  Provenance tag_ = Provenance::other;
};

}  // namespace certamp
