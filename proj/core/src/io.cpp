#include "gpsim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gpsim {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line_no) {
    const std::string t = trim(tok);
    if (t.empty()) {
        throw CsvError(path + ":" + std::to_string(line_no) + ": empty numeric field");
    }
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        throw CsvError(path + ":" + std::to_string(line_no) + ": bad numeric field '" + t + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError(path + ": cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw CsvError(path + ": empty file");
    Table t;
    for (auto& name : split_line(line)) t.columns.push_back(trim(name));
    if (t.columns.empty()) throw CsvError(path + ": no header columns");

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto toks = split_line(line);
        if (toks.size() != t.columns.size()) {
            throw CsvError(path + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(t.columns.size()) + " fields, got " +
                           std::to_string(toks.size()));
        }
        std::vector<double> row(toks.size());
        for (std::size_t j = 0; j < toks.size(); ++j) row[j] = parse_double(toks[j], path, line_no);
        rows.push_back(std::move(row));
    }
    t.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(t.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return t;
}

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open for writing");
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        out << (j ? "," : "") << table.columns[j];
    }
    out << "\n";
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
            out << (j ? "," : "") << format_double(table.values(i, j));
        }
        out << "\n";
    }
    if (!out) throw CsvError(path + ": write failed");
}

DatasetCsv read_dataset_csv(const std::string& path) {
    const Table t = read_csv(path);
    DatasetCsv d;
    std::size_t p = t.columns.size();
    d.has_y = !t.columns.empty() && t.columns.back() == "y";
    if (d.has_y) --p;
    if (p == 0) throw CsvError(path + ": no predictor columns");
    for (std::size_t j = 0; j < p; ++j) {
        const std::string expect = "x" + std::to_string(j + 1);
        if (t.columns[j] != expect) {
            throw CsvError(path + ": expected column '" + expect + "', found '" + t.columns[j] +
                           "'");
        }
    }
    d.X = t.values.leftCols(static_cast<Eigen::Index>(p));
    if (d.has_y) d.y = t.values.rightCols(1);
    return d;
}

void write_dataset_csv(const std::string& path, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& y) {
    if (X.rows() != y.size()) throw std::invalid_argument("write_dataset_csv: X/y mismatch");
    Table t;
    for (Eigen::Index j = 0; j < X.cols(); ++j) t.columns.push_back("x" + std::to_string(j + 1));
    t.columns.push_back("y");
    t.values.resize(X.rows(), X.cols() + 1);
    t.values.leftCols(X.cols()) = X;
    t.values.rightCols(1) = y;
    write_csv(path, t);
}

namespace {

Table chain_table(const Chain& chain) {
    Table t;
    const Eigen::Index p = chain.p();
    const std::string stem = chain.family == KernelFamily::SIM ? "beta_" : "theta_";
    t.columns.push_back("iter");
    for (Eigen::Index j = 0; j < p; ++j) t.columns.push_back(stem + std::to_string(j + 1));
    t.columns.push_back("eta");
    t.columns.push_back("log_post");
    t.values.resize(static_cast<Eigen::Index>(chain.size()), p + 3);
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        t.values(r, 0) = static_cast<double>(i + 1);
        t.values.block(r, 1, 1, p) = chain.samples[i].beta.transpose();
        t.values(r, p + 1) = chain.samples[i].eta;
        t.values(r, p + 2) = chain.log_post.size() == chain.size() ? chain.log_post[i] : 0.0;
    }
    return t;
}

}  // namespace

void write_chain_csv(const std::string& path, const Chain& chain) {
    write_csv(path, chain_table(chain));
}

void write_chain_csv(const std::string& path, const ReconciledChain& rec) {
    Table t = chain_table(rec.chain);
    t.columns.push_back("flips");
    Table t2;
    t2.columns = t.columns;
    t2.values.resize(t.values.rows(), t.values.cols() + 1);
    t2.values.leftCols(t.values.cols()) = t.values;
    for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
        t2.values(i, t.values.cols()) = rec.flips[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    write_csv(path, t2);
}

Chain read_chain_csv(const std::string& path) {
    const Table t = read_csv(path);
    if (t.columns.size() < 4 || t.columns.front() != "iter") {
        throw CsvError(path + ": not a chain file (expected iter,beta_1..,eta,log_post)");
    }
    std::size_t ncol = t.columns.size();
    if (t.columns.back() == "flips") --ncol;  // reconciled chain

    const std::string stem =
        ncol >= 2 && t.columns[1].rfind("theta_", 0) == 0 ? "theta_" : "beta_";
    if (ncol < 4 || t.columns[ncol - 2] != "eta" || t.columns[ncol - 1] != "log_post") {
        throw CsvError(path + ": not a chain file (expected iter,beta_1..,eta,log_post)");
    }
    const std::size_t p = ncol - 3;
    for (std::size_t j = 0; j < p; ++j) {
        const std::string expect = stem + std::to_string(j + 1);
        if (t.columns[1 + j] != expect) {
            throw CsvError(path + ": expected column '" + expect + "', found '" +
                           t.columns[1 + j] + "'");
        }
    }
    Chain chain;
    chain.family = stem == "beta_" ? KernelFamily::SIM
               : (p == 1 ? KernelFamily::Isotropic : KernelFamily::Separable);
    const Eigen::Index T = t.values.rows();
    if (T == 0) throw CsvError(path + ": chain file has no samples");
    chain.samples.reserve(static_cast<std::size_t>(T));
    for (Eigen::Index i = 0; i < T; ++i) {
        ChainSample s;
        s.beta = t.values.block(i, 1, 1, static_cast<Eigen::Index>(p)).transpose();
        s.eta = t.values(i, static_cast<Eigen::Index>(p) + 1);
        chain.samples.push_back(std::move(s));
        chain.log_post.push_back(t.values(i, static_cast<Eigen::Index>(p) + 2));
    }
    return chain;
}

void write_results_csv(const std::string& path, const ComparisonSummary& s) {
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open for writing");
    out << "method,replicate,sqrt_mah\n";
    for (std::size_t m = 0; m < s.methods.size(); ++m) {
        for (std::size_t r = 0; r < s.sqrt_mah[m].size(); ++r) {
            out << s.methods[m] << "," << (r + 1) << "," << format_double(s.sqrt_mah[m][r])
                << "\n";
        }
    }
    if (!out) throw CsvError(path + ": write failed");
}

void write_summary_csv(const std::string& path, const ComparisonSummary& s) {
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open for writing");
    out << "stat";
    for (const auto& m : s.methods) out << "," << m;
    out << "\n";
    const char* names[6] = {"min", "q1", "median", "mean", "q3", "max"};
    for (int row = 0; row < 6; ++row) {
        out << names[row];
        for (const auto& st : s.summary) {
            const double v = row == 0   ? st.min
                             : row == 1 ? st.q1
                             : row == 2 ? st.median
                             : row == 3 ? st.mean
                             : row == 4 ? st.q3
                                        : st.max;
            out << "," << format_double(v);
        }
        out << "\n";
    }
    if (!out) throw CsvError(path + ": write failed");
}

}  // namespace gpsim
