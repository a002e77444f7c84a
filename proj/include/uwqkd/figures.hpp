#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uwqkd/csv.hpp"

namespace uwqkd::figures {

// Canonical sweeps: fig3 (QBER vs FOV and aperture), fig4 (QBER components vs
// range), fig5/fig6 (total QBER vs range, ordinary/optimal), fig7 (sifted
// rate), fig8 (secure rates).
const std::vector<std::string>& names();

// Long-format table: case, chi_c, mode, x column, outputs.
io::CsvTable build(std::string_view name, const std::optional<std::string>& radiance_path = {});

// Matplotlib script that plots `csv_file` (a path relative to the script).
std::string plot_script(std::string_view name, const std::string& csv_file);

struct Written {
    std::string csv_path;
    std::string script_path;
};

Written reproduce(std::string_view name, const std::string& out_dir,
                  const std::optional<std::string>& radiance_path = {});

}  // namespace uwqkd::figures
