#include "tanhflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tanhflow/kernels.hpp"

namespace tanhflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const CsvTable& table, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    for (size_t i = 0; i < table.header.size(); ++i)
        os << table.header[i] << (i + 1 < table.header.size() ? "," : "");
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        os << "\n";
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable t;
    std::string line;
    if (std::getline(is, line)) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_phi1_csv(const Phi1Field& field, const std::string& path) {
    CsvTable t;
    t.header = {"y", "re_phi1", "im_phi1", "re_dphi1", "im_dphi1"};
    for (int i = 0; i < field.grid.size(); ++i)
        t.rows.push_back({field.grid.y(i), field.phi1[i].real(), field.phi1[i].imag(),
                          field.dphi1[i].real(), field.dphi1[i].imag()});
    write_csv(t, path);
}

void write_kernel_table_csv(const KernelTable& table, const std::string& path) {
    CsvTable t;
    t.header = {"c", "alpha", "W1", "A", "A_tilde", "A_ttilde",
                "re_T", "im_T", "re_mu", "im_mu", "chi0"};
    for (size_t j = 0; j < table.c.size(); ++j) {
        double at = table.A_t.empty() ? 0.0 : table.A_t[j];
        double att = table.A_tt.empty() ? 0.0 : table.A_tt[j];
        t.rows.push_back({table.c[j], double(table.alpha()), table.W1[j], table.A[j],
                          at, att, table.T_pv[j].real(), table.T_pv[j].imag(),
                          table.mu[j].real(), table.mu[j].imag(), table.chi0v[j]});
    }
    write_csv(t, path);
}

}  // namespace tanhflow
