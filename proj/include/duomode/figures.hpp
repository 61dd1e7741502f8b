#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace duomode {

enum class FigureId { Fig2a, Fig2b, Fig5, Fig6, Fig7, Fig8, Fig9, Fig10 };

std::optional<FigureId> figure_from_name(const std::string& name);

/// Emits the CSV behind one figure. Each row echoes all inputs
/// (kappa,g,lambda,phi,n,m,stable) followed by the figure's quantity
/// column(s); rows where a degree is undefined leave its cell empty.
/// lambda_override applies to Fig7 (its source states both 0.8 and 5 for
/// lambda; 0.8 is the default here).
void write_figure(FigureId id, std::ostream& out,
                  std::optional<double> lambda_override = std::nullopt);

}  // namespace duomode
