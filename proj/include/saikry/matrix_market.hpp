#ifndef SAIKRY_MATRIX_MARKET_HPP
#define SAIKRY_MATRIX_MARKET_HPP

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "saikry/sparse.hpp"

namespace saikry {

struct MatrixMarketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void write_matrix_market(const SparseMatrix& A, std::ostream& os) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << A.n_rows << ' ' << A.n_cols << ' ' << A.nnz() << '\n';
    char buf[32];
    for (int i = 0; i < A.n_rows; ++i) {
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), A.values[k]);
            os << (i + 1) << ' ' << (A.col_idx[k] + 1) << ' '
               << std::string_view(buf, static_cast<size_t>(ptr - buf)) << '\n';
        }
    }
}

inline void write_matrix_market(const SparseMatrix& A, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw MatrixMarketError("cannot open for writing: " + path);
    write_matrix_market(A, os);
    if (!os) throw MatrixMarketError("write failed: " + path);
}

inline SparseMatrix read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw MatrixMarketError("empty stream");
    if (line.rfind("%%MatrixMarket", 0) != 0) throw MatrixMarketError("missing banner");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (object != "matrix" || format != "coordinate")
        throw MatrixMarketError("unsupported layout: " + line);
    if (field != "real" && field != "integer")
        throw MatrixMarketError("unsupported field: " + field);
    const bool symmetric = (symmetry == "symmetric");
    if (!symmetric && symmetry != "general")
        throw MatrixMarketError("unsupported symmetry: " + symmetry);

    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream dims(line);
    int rows = 0, cols = 0;
    long nnz = 0;
    if (!(dims >> rows >> cols >> nnz)) throw MatrixMarketError("bad size line");
    if (rows != cols) throw MatrixMarketError("only square matrices supported");

    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(nnz));
    for (long k = 0; k < nnz; ++k) {
        int i = 0, j = 0;
        double v = 0.0;
        if (!(is >> i >> j >> v)) throw MatrixMarketError("truncated entry list");
        trips.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) trips.push_back({j - 1, i - 1, v});
    }
    return csr_from_triplets(rows, std::move(trips));
}

inline SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw MatrixMarketError("cannot open: " + path);
    return read_matrix_market(is);
}

}  // namespace saikry

#endif  // SAIKRY_MATRIX_MARKET_HPP
