#ifndef FACET_SRC_BINARY_IO_HPP
#define FACET_SRC_BINARY_IO_HPP

// Little-endian helpers shared by the FEMB and FPRD formats.

#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>

#include "facet/error.hpp"

namespace facet::detail {

class LeReader {
public:
    LeReader(std::istream& in, std::string context) : in_(in), context_(std::move(context)) {
        const auto start = in_.tellg();
        if (start != std::streampos(-1)) {
            in_.seekg(0, std::ios::end);
            const auto end = in_.tellg();
            in_.seekg(start);
            if (end != std::streampos(-1)) remaining_ = static_cast<std::uint64_t>(end - start);
        }
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::Format, context_ + ": " + what);
    }

    void bytes(void* dst, std::size_t n) {
        if (remaining_ && *remaining_ < n) fail("truncated payload");
        in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated payload");
        if (remaining_) *remaining_ -= n;
    }

    template <class T>
    T scalar() {
        if constexpr (std::is_same_v<T, double>) {
            return std::bit_cast<double>(scalar<std::uint64_t>());
        } else if constexpr (std::is_same_v<T, float>) {
            return std::bit_cast<float>(scalar<std::uint32_t>());
        } else {
            unsigned char buf[sizeof(T)];
            bytes(buf, sizeof(T));
            std::make_unsigned_t<T> v = 0;
            for (std::size_t i = sizeof(T); i > 0; --i) v = static_cast<decltype(v)>((v << 8) | buf[i - 1]);
            return static_cast<T>(v);
        }
    }

    std::string string(std::uint32_t max_bytes = 1u << 20) {
        const auto len = scalar<std::uint32_t>();
        if (len > max_bytes) fail("string length " + std::to_string(len) + " too large");
        std::string s(len, '\0');
        if (len > 0) bytes(s.data(), len);
        return s;
    }

    /// Reads a u64 count and checks that `count * min_item_bytes` can still
    /// be present in the stream.
    std::uint64_t count(std::uint64_t min_item_bytes) {
        const auto n = scalar<std::uint64_t>();
        if (remaining_ && min_item_bytes > 0 && n > *remaining_ / min_item_bytes) fail("truncated payload");
        return n;
    }

    std::optional<std::uint64_t> remaining() const noexcept { return remaining_; }
    bool at_end() { return remaining_ ? *remaining_ == 0 : in_.peek() == std::char_traits<char>::eof(); }

private:
    std::istream& in_;
    std::string context_;
    std::optional<std::uint64_t> remaining_;
};

class LeWriter {
public:
    explicit LeWriter(std::ostream& out) : out_(out) {}

    template <class T>
    void scalar(T value) {
        if constexpr (std::is_same_v<T, double>) {
            scalar(std::bit_cast<std::uint64_t>(value));
        } else if constexpr (std::is_same_v<T, float>) {
            scalar(std::bit_cast<std::uint32_t>(value));
        } else {
            using U = std::make_unsigned_t<T>;
            auto v = static_cast<U>(value);
            unsigned char buf[sizeof(T)];
            for (std::size_t i = 0; i < sizeof(T); ++i) {
                buf[i] = static_cast<unsigned char>(v & 0xffu);
                v = static_cast<U>(v >> 8);
            }
            out_.write(reinterpret_cast<const char*>(buf), sizeof(T));
        }
    }

    void string(const std::string& s) {
        scalar<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    void raw(const void* data, std::size_t n) { out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n)); }

private:
    std::ostream& out_;
};

}  // namespace facet::detail

#endif
