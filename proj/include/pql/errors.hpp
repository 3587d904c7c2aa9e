#pragma once

#include <stdexcept>
#include <string>

namespace pql {

enum class Errc {
  cyclic_graph,
  not_arborescence,
  not_tree,
  infeasible_spec,
  no_valid_cross_edge,
  vertex_out_of_range,
  vertex_not_in_scope,
  empty_batch,
  empty_vertex_set,
  precondition,
  iteration_cap,
  loop_cap,
  no_parent,
  no_cross_edge,
  ambiguous_candidate,
  root_not_progressing,
  not_butterfly,
  bad_config,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::cyclic_graph: return "cyclic_graph";
    case Errc::not_arborescence: return "not_arborescence";
    case Errc::not_tree: return "not_tree";
    case Errc::infeasible_spec: return "infeasible_spec";
    case Errc::no_valid_cross_edge: return "no_valid_cross_edge";
    case Errc::vertex_out_of_range: return "vertex_out_of_range";
    case Errc::vertex_not_in_scope: return "vertex_not_in_scope";
    case Errc::empty_batch: return "empty_batch";
    case Errc::empty_vertex_set: return "empty_vertex_set";
    case Errc::precondition: return "precondition";
    case Errc::iteration_cap: return "iteration_cap";
    case Errc::loop_cap: return "loop_cap";
    case Errc::no_parent: return "no_parent";
    case Errc::no_cross_edge: return "no_cross_edge";
    case Errc::ambiguous_candidate: return "ambiguous_candidate";
    case Errc::root_not_progressing: return "root_not_progressing";
    case Errc::not_butterfly: return "not_butterfly";
    case Errc::bad_config: return "bad_config";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

  /// Caps on randomized loops surface as learner failures; everything else
  /// is treated as a precondition/usage problem by the CLI.
  bool is_learner_failure() const {
    return code_ == Errc::iteration_cap || code_ == Errc::loop_cap;
  }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pql
