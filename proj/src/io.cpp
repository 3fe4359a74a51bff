#include "itlrr/io.hpp"

#include "itlrr/error.hpp"
#include "itlrr/segmentation.hpp"
#include "itlrr/solver.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace itlrr {

namespace {

constexpr std::string_view kCubeMagic = "ITC1";
constexpr std::string_view kLabelMagic = "ITL1";

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

class ByteReader {
public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    std::uint64_t u64() { return take<std::uint64_t>(8); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(take<std::uint64_t>(4)); }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    void skip(std::size_t n) { pos_ += n; }

private:
    template <typename T>
    T take(int n) {
        if (remaining() < static_cast<std::size_t>(n)) fail(ErrorKind::validation, "truncated binary file");
        T v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += n;
        return v;
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::size_t checked_product(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    constexpr std::uint64_t limit = std::uint64_t{1} << 40;
    if (a > limit || b > limit || c > limit || (b != 0 && c != 0 && a > limit / b / c)) {
        fail(ErrorKind::validation, "binary file declares implausible dimensions");
    }
    return static_cast<std::size_t>(a * b * c);
}

}  // namespace

std::string encode_cube(const Cube& c) {
    std::string out(kCubeMagic);
    out.reserve(4 + 24 + 8 * c.size());
    put_u64(out, c.rows());
    put_u64(out, c.cols());
    put_u64(out, c.bands());
    for (double v : c.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

Cube decode_cube(std::string_view bytes) {
    if (bytes.substr(0, 4) != kCubeMagic) return parse_cube_csv(bytes);
    ByteReader in(bytes);
    in.skip(4);
    const std::uint64_t rows = in.u64(), cols = in.u64(), bands = in.u64();
    const std::size_t n = checked_product(rows, cols, bands);
    if (in.remaining() != 8 * n) {
        fail(ErrorKind::validation, "cube file: payload holds " + std::to_string(in.remaining()) + " bytes, expected " +
                                        std::to_string(8 * n));
    }
    std::vector<double> data(n);
    for (auto& v : data) v = std::bit_cast<double>(in.u64());
    return Cube(rows, cols, bands, std::move(data));
}

Cube parse_cube_csv(std::string_view text) {
    struct Entry {
        std::size_t r, c, b;
        double v;
    };
    std::vector<Entry> entries;
    std::size_t rows = 0, cols = 0, bands = 0;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        Entry e{};
        const char* p = line.data();
        const char* end = line.data() + line.size();
        std::size_t* idx[3] = {&e.r, &e.c, &e.b};
        bool ok = true;
        for (auto* field : idx) {
            const auto res = std::from_chars(p, end, *field);
            ok = ok && res.ec == std::errc{} && res.ptr < end && *res.ptr == ',';
            p = ok ? res.ptr + 1 : end;
        }
        if (ok) {
            const auto res = std::from_chars(p, end, e.v);
            ok = res.ec == std::errc{} && res.ptr == end;
        }
        if (!ok) fail(ErrorKind::validation, "cube csv: malformed line " + std::to_string(line_no));
        rows = std::max(rows, e.r + 1);
        cols = std::max(cols, e.c + 1);
        bands = std::max(bands, e.b + 1);
        entries.push_back(e);
    }
    if (entries.empty()) fail(ErrorKind::validation, "cube csv: no entries");
    if (entries.size() != rows * cols * bands) {
        fail(ErrorKind::validation, "cube csv: entries do not cover the full " + std::to_string(rows) + "x" +
                                        std::to_string(cols) + "x" + std::to_string(bands) + " grid");
    }
    std::vector<double> data(rows * cols * bands);
    std::vector<std::uint8_t> seen(data.size(), 0);
    for (const auto& e : entries) {
        const std::size_t k = (e.r * cols + e.c) * bands + e.b;
        if (seen[k]) fail(ErrorKind::validation, "cube csv: duplicate entry");
        seen[k] = 1;
        data[k] = e.v;
    }
    return Cube(rows, cols, bands, std::move(data));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(ErrorKind::io, "read error on '" + path.string() + "'");
    return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, "write error on '" + path.string() + "'");
}

Cube read_cube(const std::filesystem::path& path) { return decode_cube(read_file(path)); }

void write_cube(const std::filesystem::path& path, const Cube& c) { write_file(path, encode_cube(c)); }

std::string encode_labels_csv(const LabelMap& lm) {
    std::string out;
    for (std::size_t r = 0; r < lm.rows(); ++r) {
        for (std::size_t c = 0; c < lm.cols(); ++c) {
            if (c) out.push_back(',');
            out += std::to_string(lm(r, c));
        }
        out.push_back('\n');
    }
    return out;
}

std::string encode_labels_binary(const LabelMap& lm) {
    std::string out(kLabelMagic);
    put_u64(out, lm.rows());
    put_u64(out, lm.cols());
    for (std::int32_t v : lm.labels()) put_u32(out, static_cast<std::uint32_t>(v));
    return out;
}

LabelMap decode_labels(std::string_view bytes) {
    if (bytes.substr(0, 4) != kLabelMagic) return parse_labelmap_csv(bytes);
    ByteReader in(bytes);
    in.skip(4);
    const std::uint64_t rows = in.u64(), cols = in.u64();
    const std::size_t n = checked_product(rows, cols, 1);
    if (in.remaining() != 4 * n) fail(ErrorKind::validation, "label file: payload size does not match dimensions");
    std::vector<std::int64_t> raw(n);
    for (auto& v : raw) v = static_cast<std::int32_t>(in.u32());
    return compact_labels(rows, cols, raw);
}

void write_labels(const std::filesystem::path& path, const LabelMap& lm) {
    write_file(path, path.extension() == ".itl" ? encode_labels_binary(lm) : encode_labels_csv(lm));
}

LabelMap load_labelmap(const std::filesystem::path& path) { return decode_labels(read_file(path)); }

std::string encode_trace_csv(const Decomposition& d) {
    const bool objective = !d.objective_trace.empty();
    std::string out = "# converged=" + std::string(d.converged ? "true" : "false") +
                      " iterations=" + std::to_string(d.iterations) + "\n";
    out += objective ? "iter,residual,mu,objective\n" : "iter,residual,mu\n";
    char buf[128];
    for (std::size_t t = 0; t < d.residual_trace.size(); ++t) {
        int n = std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", t + 1, d.residual_trace[t], d.mu_trace[t]);
        out.append(buf, static_cast<std::size_t>(n));
        if (objective) {
            n = std::snprintf(buf, sizeof buf, ",%.17g", d.objective_trace[t]);
            out.append(buf, static_cast<std::size_t>(n));
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace itlrr
