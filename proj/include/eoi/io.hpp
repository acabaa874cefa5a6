#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "eoi/conv.hpp"
#include "eoi/sparse_ortho.hpp"

namespace eoi {

/// 17 significant digits, enough to round-trip any double exactly.
inline std::string format_17g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Shortest representation that parses back to the same double (CSV/JSON).
inline std::string format_shortest(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Matrix text format: header "rows cols nnz", then one structural nonzero
/// per line as "row col value", 0-based, ascending (row, col).
inline void write_matrix(const SparseOrthoMatrix& a, std::ostream& out) {
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.in_support(r, c)) out << r << ' ' << c << ' ' << format_17g(a.value(r, c)) << '\n';
}

inline void write_matrix_file(const SparseOrthoMatrix& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_matrix_file: cannot open " + path);
    write_matrix(a, out);
}

inline SparseOrthoMatrix read_matrix(std::istream& in) {
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(in >> rows >> cols >> nnz)) throw std::invalid_argument("read_matrix: malformed header");
    if (rows == 0 || cols == 0) throw std::invalid_argument("read_matrix: empty shape");
    std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
    entries.reserve(nnz);
    for (std::size_t e = 0; e < nnz; ++e) {
        std::size_t r = 0, c = 0;
        double v = 0.0;
        if (!(in >> r >> c >> v)) throw std::invalid_argument("read_matrix: truncated entry list");
        if (r >= rows || c >= cols) throw std::invalid_argument("read_matrix: entry index out of range");
        entries.emplace_back(r, c, v);
    }
    return SparseOrthoMatrix::from_triplets(rows, cols, entries);
}

inline SparseOrthoMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_matrix_file: cannot open " + path);
    return read_matrix(in);
}

/// Kernel text format: header "c_out c_in k nnz_mask", then the mask
/// entries "i j p q" in ascending order, then the center weight entries
/// "i j value".
inline void write_kernel(const ConvKernel& kernel, std::ostream& out) {
    out << kernel.c_out << ' ' << kernel.c_in << ' ' << kernel.k << ' ' << kernel.mask_population() << '\n';
    const std::size_t K = kernel.kernel_width();
    for (std::size_t i = 0; i < kernel.c_out; ++i)
        for (std::size_t j = 0; j < kernel.c_in; ++j)
            for (std::size_t p = 0; p < K; ++p)
                for (std::size_t q = 0; q < K; ++q)
                    if (kernel.masked_in(i, j, p, q)) out << i << ' ' << j << ' ' << p << ' ' << q << '\n';
    for (std::size_t i = 0; i < kernel.c_out; ++i)
        for (std::size_t j = 0; j < kernel.c_in; ++j) {
            const double v = kernel.weight(i, j, kernel.k, kernel.k);
            if (v != 0.0) out << i << ' ' << j << ' ' << format_17g(v) << '\n';
        }
}

inline void write_kernel_file(const ConvKernel& kernel, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_kernel_file: cannot open " + path);
    write_kernel(kernel, out);
}

inline ConvKernel read_kernel(std::istream& in) {
    std::size_t c_out = 0, c_in = 0, k = 0, nnz_mask = 0;
    if (!(in >> c_out >> c_in >> k >> nnz_mask)) throw std::invalid_argument("read_kernel: malformed header");
    if (c_out == 0 || c_in == 0) throw std::invalid_argument("read_kernel: empty shape");
    ConvKernel kernel;
    kernel.c_out = c_out;
    kernel.c_in = c_in;
    kernel.k = k;
    kernel.weights.assign(kernel.total(), 0.0);
    kernel.mask.assign(kernel.total(), 0);
    const std::size_t K = kernel.kernel_width();
    for (std::size_t e = 0; e < nnz_mask; ++e) {
        std::size_t i = 0, j = 0, p = 0, q = 0;
        if (!(in >> i >> j >> p >> q)) throw std::invalid_argument("read_kernel: truncated mask list");
        if (i >= c_out || j >= c_in || p >= K || q >= K)
            throw std::invalid_argument("read_kernel: mask index out of range");
        kernel.mask[kernel.index(i, j, p, q)] = 1;
    }
    std::size_t i = 0, j = 0;
    double v = 0.0;
    std::size_t nnz_center = 0;
    while (in >> i >> j >> v) {
        if (i >= c_out || j >= c_in) throw std::invalid_argument("read_kernel: weight index out of range");
        kernel.weights[kernel.index(i, j, k, k)] = v;
        ++nnz_center;
    }
    kernel.center_density =
        static_cast<double>(nnz_center) / (static_cast<double>(c_out) * static_cast<double>(c_in));
    return kernel;
}

inline ConvKernel read_kernel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_kernel_file: cannot open " + path);
    return read_kernel(in);
}

/// Optimizer loss trace as "iter,loss" rows; entry 0 is the starting loss.
inline void write_loss_trace(const std::vector<double>& trace, std::ostream& out) {
    out << "iter,loss\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << ',' << format_shortest(trace[i]) << '\n';
}

inline void write_loss_trace_file(const std::vector<double>& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_loss_trace_file: cannot open " + path);
    write_loss_trace(trace, out);
}

} // namespace eoi
