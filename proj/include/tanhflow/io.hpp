#ifndef TANHFLOW_IO_HPP
#define TANHFLOW_IO_HPP

#include <string>
#include <vector>

#include "tanhflow/rayleigh.hpp"

namespace tanhflow {

// CSV with a header row; numbers printed with %.17g so reruns are
// byte-identical.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(const CsvTable& table, const std::string& path);
std::string format_double(double v);

// Phi1Field dump (columns: y, Re phi1, Im phi1, Re dphi1, Im dphi1) for
// caching across runs, plus the matching loader.
void write_phi1_csv(const Phi1Field& field, const std::string& path);
CsvTable read_csv(const std::string& path);

}  // namespace tanhflow

#endif
