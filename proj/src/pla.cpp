#include "etpla/pla.hpp"

namespace etpla {

std::vector<std::string> PlaMatrix::line_labels() const {
  std::vector<std::string> labels;
  labels.reserve(inputs.size() * 2);
  for (const auto& name : inputs) {
    labels.push_back(name);
    labels.push_back(name + "'");
  }
  return labels;
}

void validate(const PlaMatrix& matrix) {
  const std::size_t lines = 2 * static_cast<std::size_t>(matrix.n());
  if (matrix.and_plane.cols != lines || matrix.or_plane.rows != static_cast<std::size_t>(matrix.m()) ||
      matrix.or_plane.cols != matrix.and_plane.rows ||
      matrix.term_labels.size() != matrix.and_plane.rows) {
    throw Error(ErrorCode::Internal, "pla matrix dimensions inconsistent with labels");
  }
  for (std::size_t t = 0; t < matrix.term_count(); ++t) {
    bool any = false;
    for (int i = 0; i < matrix.n(); ++i) {
      const bool pos = matrix.and_plane.at(t, 2 * static_cast<std::size_t>(i));
      const bool neg = matrix.and_plane.at(t, 2 * static_cast<std::size_t>(i) + 1);
      if (pos && neg) {
        throw Error(ErrorCode::ConstantTerm, "term " + matrix.term_labels[t] +
                                                 " connects " + matrix.inputs[static_cast<std::size_t>(i)] +
                                                 " and its complement");
      }
      any = any || pos || neg;
    }
    if (!any) {
      throw Error(ErrorCode::DanglingTerm, "term " + matrix.term_labels[t] +
                                               " connects to no input line");
    }
    bool referenced = false;
    for (int k = 0; k < matrix.m(); ++k) {
      if (matrix.or_plane.at(static_cast<std::size_t>(k), t)) referenced = true;
    }
    if (!referenced) {
      throw Error(ErrorCode::DanglingTerm, "term " + matrix.term_labels[t] +
                                               " is referenced by no output");
    }
  }
}

PlaMatrix from_sop(const SopExpression& expr) {
  PlaMatrix matrix;
  matrix.inputs = expr.inputs;
  matrix.outputs = expr.outputs;
  matrix.and_plane = BoolMatrix(expr.terms.size(), 2 * static_cast<std::size_t>(expr.n()));
  matrix.or_plane = BoolMatrix(static_cast<std::size_t>(expr.m()), expr.terms.size());
  for (std::size_t t = 0; t < expr.terms.size(); ++t) {
    const Implicant& imp = expr.terms[t];
    if (imp.care == 0) {
      throw Error(ErrorCode::EmptyTerm,
                  "term with no literals cannot be stitched into the and-plane");
    }
    for (int i = 0; i < expr.n(); ++i) {
      if (!(imp.care & (1u << i))) continue;
      const bool positive = imp.value & (1u << i);
      matrix.and_plane.at(t, 2 * static_cast<std::size_t>(i) + (positive ? 0 : 1)) = 1;
    }
    matrix.term_labels.push_back(implicant_label(imp, expr.inputs));
  }
  for (int k = 0; k < expr.m(); ++k) {
    for (int t : expr.cover[static_cast<std::size_t>(k)]) {
      matrix.or_plane.at(static_cast<std::size_t>(k), static_cast<std::size_t>(t)) = 1;
    }
  }
  validate(matrix);
  return matrix;
}

PlaMatrix program(const PlaMatrix& matrix, const PlaEdit& edit) {
  PlaMatrix next = matrix;
  if (edit.plane == PlaEdit::Plane::And) {
    if (edit.row >= next.and_plane.rows || edit.col >= next.and_plane.cols) {
      throw Error(ErrorCode::OutOfRange, "and-plane edit at (" + std::to_string(edit.row) + ", " +
                                             std::to_string(edit.col) + ")");
    }
    next.and_plane.at(edit.row, edit.col) = edit.connect ? 1 : 0;
    next.term_labels[edit.row] =
        implicant_label(term_implicant(next, edit.row), next.inputs);
  } else {
    if (edit.row >= next.or_plane.rows || edit.col >= next.or_plane.cols) {
      throw Error(ErrorCode::OutOfRange, "or-plane edit at (" + std::to_string(edit.row) + ", " +
                                             std::to_string(edit.col) + ")");
    }
    next.or_plane.at(edit.row, edit.col) = edit.connect ? 1 : 0;
  }
  validate(next);
  return next;
}

Implicant term_implicant(const PlaMatrix& matrix, std::size_t term) {
  Implicant imp;
  for (int i = 0; i < matrix.n(); ++i) {
    const bool pos = matrix.and_plane.at(term, 2 * static_cast<std::size_t>(i));
    const bool neg = matrix.and_plane.at(term, 2 * static_cast<std::size_t>(i) + 1);
    if (pos || neg) {
      imp.care |= (1u << i);
      if (pos) imp.value |= (1u << i);
    }
  }
  return imp;
}

std::string eval_matrix(const PlaMatrix& matrix, std::uint32_t vector_idx) {
  const int n = matrix.n();
  std::vector<bool> term_values(matrix.term_count(), true);
  for (std::size_t t = 0; t < matrix.term_count(); ++t) {
    for (int i = 0; i < n; ++i) {
      const bool bit = (vector_idx >> (n - 1 - i)) & 1u;
      if (matrix.and_plane.at(t, 2 * static_cast<std::size_t>(i)) && !bit) term_values[t] = false;
      if (matrix.and_plane.at(t, 2 * static_cast<std::size_t>(i) + 1) && bit) term_values[t] = false;
    }
  }
  std::string out(static_cast<std::size_t>(matrix.m()), '0');
  for (int k = 0; k < matrix.m(); ++k) {
    for (std::size_t t = 0; t < matrix.term_count(); ++t) {
      if (matrix.or_plane.at(static_cast<std::size_t>(k), t) && term_values[t]) {
        out[static_cast<std::size_t>(k)] = '1';
        break;
      }
    }
  }
  return out;
}

MismatchReport verify(const PlaMatrix& matrix, const TruthTable& table) {
  if (matrix.n() != table.n() || matrix.m() != table.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(matrix.n()) + "x" + std::to_string(matrix.m()) +
                    ", table is " + std::to_string(table.n()) + "x" + std::to_string(table.m()));
  }
  MismatchReport report;
  const std::uint32_t total = 1u << table.n();
  for (std::uint32_t v = 0; v < total; ++v) {
    const std::string actual = eval_matrix(matrix, v);
    const std::string& expected = table.rows[v];
    bool differs = false;
    for (int k = 0; k < table.m(); ++k) {
      const char want = expected[static_cast<std::size_t>(k)];
      if (want != '-' && want != actual[static_cast<std::size_t>(k)]) {
        differs = true;
        break;
      }
    }
    if (differs) report.mismatches.push_back({v, vector_string(v, table.n()), expected, actual});
  }
  return report;
}

}  // namespace etpla
