#include "falc/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace falc {

namespace {

constexpr std::array<char, 6> kMagic{'F', 'M', 'A', 'T', '1', '\0'};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view field, std::size_t line_no) {
    field = trim(field);
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw MatrixFormatError("CSV line " + std::to_string(line_no) + ": cannot parse '" +
                                std::string(field) + "'");
    }
    if (!std::isfinite(v)) {
        throw MatrixFormatError("CSV line " + std::to_string(line_no) + ": non-finite value");
    }
    return v;
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw MatrixFormatError("FMAT1: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

DenseMatrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = view.find(',', start);
            row.push_back(parse_real(view.substr(start, comma - start), line_no));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw MatrixFormatError("CSV line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(rows.front().size()) + " fields");
        }
        rows.push_back(std::move(row));
    }
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.front().size();
    DenseMatrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = rows[i][j];
    return out;
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& a) {
    std::array<char, 32> buf{};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j > 0) out << ',';
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), a(i, j),
                                           std::chars_format::general, 17);
            out.write(buf.data(), res.ptr - buf.data());
        }
        out << '\n';
    }
}

DenseMatrix read_fmat(std::istream& in) {
    std::array<char, 6> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw MatrixFormatError("FMAT1: bad magic");
    }
    const std::uint64_t rows = get_u64(in);
    const std::uint64_t cols = get_u64(in);
    if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
        throw MatrixFormatError("FMAT1: implausible dimensions");
    }
    std::vector<double> data(rows * cols);
    for (double& v : data) {
        const std::uint64_t bits = get_u64(in);
        v = std::bit_cast<double>(bits);
        if (!std::isfinite(v)) throw MatrixFormatError("FMAT1: non-finite value");
    }
    return DenseMatrix(rows, cols, std::move(data));
}

void write_fmat(std::ostream& out, const DenseMatrix& a) {
    out.write(kMagic.data(), kMagic.size());
    put_u64(out, a.rows());
    put_u64(out, a.cols());
    for (double v : a.span()) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MatrixFormatError("cannot open " + path.string());
    std::array<char, 6> head{};
    in.read(head.data(), head.size());
    const bool is_fmat = in.gcount() == 6 && head == kMagic;
    in.clear();
    in.seekg(0);
    return is_fmat ? read_fmat(in) : read_matrix_csv(in);
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MatrixFormatError("cannot write " + path.string());
    if (path.extension() == ".csv") {
        write_matrix_csv(out, a);
    } else {
        write_fmat(out, a);
    }
    if (!out) throw MatrixFormatError("write failed for " + path.string());
}

}  // namespace falc
