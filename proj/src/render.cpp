#include "gltl/render.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gltl/error.hpp"

namespace gltl {

namespace {

const GridSpec& require_grid(const ProductMdp& p) {
  if (!p.env().grid) throw Error(ErrorCode::kInvalidArgument, "environment is not a grid");
  return *p.env().grid;
}

bool has_label(const LabeledMdp& env, int s, const char* label) {
  const auto& l = env.labels[s];
  return std::find(l.begin(), l.end(), label) != l.end();
}

int most_likely(const Distribution& d) {
  const Outcome* best = &d.front();
  for (const auto& o : d) {
    if (o.prob > best->prob) best = &o;
  }
  return best->target;
}

char cell_letter(const LabeledMdp& env, int s) {
  if (has_label(env, s, "red")) return 'r';
  if (has_label(env, s, "green")) return 'g';
  if (has_label(env, s, "blue")) return 'b';
  if (!env.labels[s].empty()) return env.labels[s].front().front();
  return '.';
}

char arrow(Direction d) {
  switch (d) {
    case Direction::kNorth: return '^';
    case Direction::kSouth: return 'v';
    case Direction::kEast: return '>';
    case Direction::kWest: return '<';
  }
  return '?';
}

std::string paint(char c, bool color) {
  if (!color) return std::string(1, c);
  const char* code = nullptr;
  switch (c) {
    case 'r': case 'R': code = "31"; break;
    case 'g': case 'G': code = "32"; break;
    case 'b': case 'B': code = "34"; break;
    case '*': case 'S': code = "1;33"; break;
    default: return std::string(1, c);
  }
  return std::string("\033[") + code + "m" + c + "\033[0m";
}

template <class CharAt>
void draw(std::ostringstream& out, const GridSpec& g, bool color, CharAt char_at) {
  for (int y = g.height - 1; y >= 0; --y) {
    out << (y < 10 ? " " : "") << y << " |";
    for (int x = 0; x < g.width; ++x) out << ' ' << paint(char_at(Cell{x, y}), color);
    out << '\n';
  }
  out << "    ";
  for (int x = 0; x < g.width; ++x) out << ' ' << (x % 10);
  out << '\n';
}

}  // namespace

GridRollout deterministic_rollout(const ProductMdp& p, const Policy& pi, std::size_t max_steps) {
  const GridSpec& g = require_grid(p);
  const SpecMdp& spec = p.spec();
  if (max_steps == 0) max_steps = static_cast<std::size_t>(4 * g.width * g.height);

  GridRollout r;
  int s = grid_state(g, g.start);
  int q = most_likely(p.spec_step(spec.initial(), s));
  std::set<std::pair<int, int>> seen;
  auto visit = [&] {
    r.cells.push_back(grid_cell(g, s));
    r.spec_states.push_back(q);
    if (!r.first_red && has_label(p.env(), s, "red")) r.first_red = r.cells.size() - 1;
  };
  visit();
  while (true) {
    if (q == spec.accept()) {
      r.outcome = EpisodeOutcome::kAccepted;
      break;
    }
    if (q == spec.reject()) {
      r.outcome = EpisodeOutcome::kRejected;
      break;
    }
    // A repeated (cell, spec state) pair means the deterministic run loops.
    if (r.cells.size() > max_steps || !seen.insert({s, q}).second) break;
    const int x = p.index_of(s, q);
    const int a = pi.actions.at(x);
    s = grid_state(g, step(g, grid_cell(g, s), kDirections[a]));
    q = most_likely(p.spec_step(q, s));
    visit();
  }
  return r;
}

std::string render_grid(const ProductMdp& p, const Policy& pi, const RenderOptions& opt) {
  const GridSpec& g = require_grid(p);
  const LabeledMdp& env = p.env();
  const int start = grid_state(g, g.start);
  std::ostringstream out;

  out << "cells (r=red g=green b=blue .=unlabeled, start in upper case or S):\n";
  draw(out, g, opt.color, [&](Cell c) {
    const int s = grid_state(g, c);
    const char letter = cell_letter(env, s);
    if (s != start) return letter;
    return letter == '.' ? 'S' : static_cast<char>(letter - 'a' + 'A');
  });

  const int q0 = p.spec().initial();
  out << "policy at spec state q" << q0 << " (- where unreachable):\n";
  draw(out, g, false, [&](Cell c) {
    const int x = p.index_of(grid_state(g, c), q0);
    if (x < 0) return '-';
    return arrow(kDirections[pi.actions.at(x)]);
  });

  if (opt.path) {
    const GridRollout r = deterministic_rollout(p, pi);
    std::set<Cell> visited(r.cells.begin(), r.cells.end());
    out << "zero-slip path:\n";
    draw(out, g, opt.color, [&](Cell c) {
      const int s = grid_state(g, c);
      if (s == start) return 'S';
      return visited.count(c) ? '*' : cell_letter(env, s);
    });
    out << "path";
    for (const auto& c : r.cells) out << " (" << c.x << "," << c.y << ")";
    out << '\n';
    if (r.first_red) {
      out << "red first reached at step " << *r.first_red << '\n';
    } else {
      out << "red never reached\n";
    }
    const char* outcome = r.outcome == EpisodeOutcome::kAccepted   ? "accept"
                          : r.outcome == EpisodeOutcome::kRejected ? "reject"
                                                                   : "unfinished";
    out << "outcome " << outcome << " after " << (r.cells.size() - 1) << " steps\n";
  }
  return out.str();
}

}  // namespace gltl
