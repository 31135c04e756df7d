#include "lsdd/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "lsdd/errors.hpp"

namespace lsdd {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
    return out;
}

bool skippable(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '%' || line[pos] == '#';
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("Matrix Market: empty input");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket" || lower(object) != "matrix") {
        throw InputError("Matrix Market: missing '%%MatrixMarket matrix' banner");
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate") throw InputError("Matrix Market: only coordinate format is supported");
    if (field != "real" && field != "integer" && field != "pattern" && field != "double") {
        throw InputError("Matrix Market: unsupported field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric") {
        throw InputError("Matrix Market: unsupported symmetry '" + symmetry + "'");
    }
    const bool pattern = field == "pattern";
    const bool symmetric = symmetry == "symmetric";

    while (std::getline(in, line) && skippable(line)) {
    }
    long long m = 0, n = 0, entries = 0;
    {
        std::istringstream size_line(line);
        if (!(size_line >> m >> n >> entries) || m < 0 || n < 0 || entries < 0) {
            throw InputError("Matrix Market: malformed size line '" + line + "'");
        }
    }
    if (symmetric && m != n) throw InputError("Matrix Market: symmetric matrix must be square");

    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
    long long read = 0;
    while (read < entries && std::getline(in, line)) {
        if (skippable(line)) continue;
        std::istringstream entry(line);
        long long i = 0, j = 0;
        double v = 1.0;
        if (!(entry >> i >> j) || (!pattern && !(entry >> v))) {
            throw InputError("Matrix Market: malformed entry '" + line + "'");
        }
        if (i < 1 || i > m || j < 1 || j > n) {
            throw InputError("Matrix Market: entry (" + std::to_string(i) + ", " +
                             std::to_string(j) + ") out of range");
        }
        if (!std::isfinite(v)) throw InputError("Matrix Market: non-finite value");
        triplets.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
        if (symmetric && i != j) {
            triplets.push_back({static_cast<Index>(j - 1), static_cast<Index>(i - 1), v});
        }
        ++read;
    }
    if (read != entries) {
        throw InputError("Matrix Market: expected " + std::to_string(entries) + " entries, found " +
                         std::to_string(read));
    }
    return SparseMatrix::from_triplets(static_cast<Index>(m), static_cast<Index>(n),
                                       std::move(triplets));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& A, bool symmetric) {
    if (symmetric && A.nrows() != A.ncols()) {
        throw InputError("write_matrix_market: symmetric output needs a square matrix");
    }
    Index count = 0;
    for (Index i = 0; i < A.nrows(); ++i) {
        for (Index j : A.row_cols(i)) {
            if (!symmetric || j <= i) ++count;
        }
    }
    out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general")
        << '\n';
    out << A.nrows() << ' ' << A.ncols() << ' ' << count << '\n';
    out << std::setprecision(17);
    for (Index i = 0; i < A.nrows(); ++i) {
        const auto cols = A.row_cols(i);
        const auto vals = A.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (symmetric && cols[k] > i) continue;
            out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
        }
    }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& A,
                         bool symmetric) {
    auto out = open_output(path);
    write_matrix_market(out, A, symmetric);
}

Vector read_vector(const std::filesystem::path& path) {
    auto in = open_input(path);
    Vector v;
    std::string line;
    while (std::getline(in, line)) {
        if (skippable(line)) continue;
        std::istringstream value(line);
        double x = 0.0;
        if (!(value >> x) || !std::isfinite(x)) {
            throw InputError("'" + path.string() + "': malformed value '" + line + "'");
        }
        v.push_back(x);
    }
    return v;
}

void write_vector(const std::filesystem::path& path, std::span<const double> v) {
    auto out = open_output(path);
    out << std::setprecision(17);
    for (double x : v) out << x << '\n';
}

std::vector<Index> read_partition(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<Index> labels;
    std::string line;
    while (std::getline(in, line)) {
        if (skippable(line)) continue;
        std::istringstream value(line);
        long long id = -1;
        if (!(value >> id) || id < 0) {
            throw InputError("'" + path.string() + "': malformed subdomain id '" + line + "'");
        }
        labels.push_back(static_cast<Index>(id));
    }
    return labels;
}

}  // namespace lsdd
