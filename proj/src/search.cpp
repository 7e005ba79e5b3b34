#include "scenegen/search.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "fmt/format.h"

#include "scenegen/error.hpp"
#include "scenegen/hierarchy.hpp"

namespace scenegen {
namespace {

struct Budgets {
  int anchor;
  int other;
  int side;
  int axis;
};

Budgets budgets(const SearchConfig& c) {
  const SearchConfig e = c.effective();
  return {e.k_global_anchor, e.k_global_other, e.k_local_side, e.k_local_axis};
}

TraceEvent event(const std::string& scope, int layer, SearchStep step, int visit, int attempt, EventKind kind,
                 const std::string& object, std::string detail) {
  TraceEvent e;
  e.scope = scope;
  e.layer = layer;
  e.step = step;
  e.visit = visit;
  e.attempt = attempt;
  e.kind = kind;
  e.object_id = object;
  e.detail = std::move(detail);
  return e;
}

OracleReply ask(const SearchContext& ctx, SearchTrace& trace, const OracleQuery& q) {
  trace.count_oracle_call();
  return ctx.oracle.query(q);
}

std::string option_token(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') {
      out.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      break;
    }
  }
  return out;
}

std::vector<Footprint> footprints(const std::vector<PlacedObject>& placed, const std::vector<const ObjectSpec*>& order,
                                  const std::string& anchor_id) {
  std::vector<Footprint> out;
  for (std::size_t i = 0; i < placed.size(); ++i) {
    out.push_back({placed[i].spec_id, effective_aabb(order[i]->dims, placed[i].yaw, placed[i].center()),
                   placed[i].spec_id == anchor_id});
  }
  return out;
}

const Edge& edge_of(const SearchArea& area, const std::string& id) {
  for (const auto& e : area.edges) {
    if (e.object_id == id) return e;
  }
  throw PreconditionError("no edge for object '" + id + "'");
}

bool contains_side(const std::vector<Side>& v, Side s) { return std::find(v.begin(), v.end(), s) != v.end(); }

std::string parse_detail(const ParseError& e) { return std::string("parse: ") + e.what(); }

}  // namespace

SearchArea region_area(const RegionPlan& region, RegionWalls walls, double cell_size) {
  SearchArea a;
  a.scope = "region:" + region.id;
  a.frame = {region.length, region.width, cell_size, walls};
  a.objects = region.objects;
  a.anchor_id = region.anchor_id;
  a.anchor_rule = region.anchor_rule;
  a.edges = region.edges;
  return a;
}

std::vector<const ObjectSpec*> layer_order(const SearchArea& area) {
  std::vector<const ObjectSpec*> out;
  for (const auto& o : area.objects) {
    if (o.id == area.anchor_id) out.push_back(&o);
  }
  if (out.empty()) throw PreconditionError("anchor '" + area.anchor_id + "' is not among the objects");
  std::vector<const ObjectSpec*> rest;
  for (const auto& o : area.objects) {
    if (o.id != area.anchor_id) rest.push_back(&o);
  }
  std::sort(rest.begin(), rest.end(), [](const ObjectSpec* a, const ObjectSpec* b) {
    const long long aa = std::llround(a->dims.footprint_area() * 1e9);
    const long long bb = std::llround(b->dims.footprint_area() * 1e9);
    if (aa != bb) return aa > bb;
    return a->id < b->id;
  });
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

AnchorAttempt propose_anchor(const SearchArea& area, const ObjectSpec& anchor,
                             const std::vector<std::string>& excluded, int attempt, const SearchContext& ctx,
                             SearchTrace& trace) {
  const auto options = anchor_options(area.frame, area.anchor_rule, anchor.dims);
  AnchorQuery q;
  q.scope = area.scope;
  q.grid_prompt = serialize_grid_prompt(rasterize(area.frame.length, area.frame.width, {}, area.frame.cell_size,
                                                  area.frame.walls),
                                        EmojiMap{});
  q.frame = area.frame;
  q.object = anchor;
  q.rule = area.anchor_rule;
  for (const auto& o : options) q.options.push_back(o.name);
  q.excluded = excluded;
  q.attempt = attempt;
  const OracleReply reply = ask(ctx, trace, q);

  AnchorAttempt out;
  const std::string token = option_token(reply.text);
  auto it = std::find_if(options.begin(), options.end(), [&](const AnchorOption& o) { return o.name == token; });
  if (it == options.end()) {
    out.reason = token.empty() ? "parse: empty reply" : "parse: unknown option '" + token + "'";
    return out;
  }
  out.proposed = it->name;
  if (std::find(excluded.begin(), excluded.end(), it->name) != excluded.end()) {
    out.reason = "repeated option " + it->name;
    return out;
  }
  if (!it->fits) {
    out.reason = "bounds";
    return out;
  }
  out.pose = *it;
  return out;
}

AnchorResult place_anchor(const SearchArea& area, const SearchContext& ctx, SearchTrace& trace) {
  const auto order = layer_order(area);
  const ObjectSpec& anchor = *order.front();
  const Budgets k = budgets(ctx.config);
  std::vector<std::string> tried;
  AnchorResult result;
  for (int attempt = 1; attempt <= k.anchor; ++attempt) {
    result.attempts = attempt;
    AnchorAttempt a = propose_anchor(area, anchor, tried, attempt, ctx, trace);
    if (!a.proposed.empty() && std::find(tried.begin(), tried.end(), a.proposed) == tried.end()) {
      tried.push_back(a.proposed);
    }
    if (!a.pose) {
      trace.record(event(area.scope, 0, SearchStep::Anchor, 1, attempt, EventKind::Rejected, anchor.id, a.reason));
      continue;
    }
    PlacedObject p{anchor.id, {a.pose->center.x, a.pose->center.y, 0.0}, a.pose->yaw, {}};
    TraceEvent e = event(area.scope, 0, SearchStep::Anchor, 1, attempt, EventKind::Accepted, anchor.id, a.pose->name);
    e.pose = TracePose{a.pose->center, a.pose->yaw};
    trace.record(std::move(e));
    result.placed = p;
    return result;
  }
  return result;
}

LocalThought local_place(const PlacementProblem& problem, const std::string& scope, int layer, int visit, int round,
                         const std::vector<Side>& excluded, const SearchContext& ctx, SearchTrace& trace) {
  const Budgets k = budgets(ctx.config);
  const std::string& id = problem.object.id;
  const OccupancyGrid grid = problem_grid(problem);
  const std::string plain_prompt = serialize_grid_prompt(grid, EmojiMap{});
  const Rect anchor_box = problem.anchor.box();
  LocalThought thought;
  std::vector<Side> tried = excluded;

  for (int a = 1; a <= k.side; ++a) {
    SideQuery sq{scope, plain_prompt, problem, tried, round, a};
    const OracleReply side_reply = ask(ctx, trace, sq);
    const auto side = parse_side(side_reply.text);
    if (!side) {
      trace.record(event(scope, layer, SearchStep::Side, visit, a, EventKind::Rejected, id, "parse: no side named"));
      continue;
    }
    if (contains_side(tried, *side)) {
      trace.record(event(scope, layer, SearchStep::Side, visit, a, EventKind::Rejected, id,
                         fmt::format("repeated side {}", to_string(*side))));
      continue;
    }
    tried.push_back(*side);
    thought.sides_tried.push_back(*side);
    thought.side = side;
    thought.primary.reset();
    thought.secondary.reset();
    trace.record(event(scope, layer, SearchStep::Side, visit, a, EventKind::Proposed, id, std::string(to_string(*side))));

    const std::vector<int> cands = candidate_cells(grid, *side, anchor_box);
    EmojiMap emap;
    try {
      emap = assign_emojis(cands, ctx.vocabulary);
    } catch (const VocabularyExhausted& e) {
      trace.record(event(scope, layer, SearchStep::Side, visit, a, EventKind::Rejected, id, e.what()));
      continue;
    }
    const std::string side_prompt = serialize_grid_prompt(grid, emap);
    SideEvalQuery eq{scope, side_prompt, problem, *side, round, a};
    const EvalVerdict verdict = parse_eval_reply(ask(ctx, trace, eq).text);
    if (!verdict.ok) {
      trace.record(event(scope, layer, SearchStep::Side, visit, a, EventKind::Rejected, id,
                         "evaluation: " + verdict.rationale));
      continue;
    }

    // Primary axis: rows for Top/Bottom, columns for Left/Right.
    const Axis pa = primary_axis(*side);
    const Axis sa = secondary_axis(*side);
    const CellSpan span = footprint_span(problem.object.dims, provisional_yaw(problem, *side), problem.frame.cell_size);
    const int count_p = pa == Axis::Columns ? span.cols : span.rows;
    const int count_s = pa == Axis::Columns ? span.rows : span.cols;
    std::vector<Run> primary_tried;
    for (int b = 1; b <= k.axis; ++b) {
      CellsQuery pq{scope, side_prompt, problem, *side, pa, std::nullopt, emap, count_p, primary_tried, round, b};
      const OracleReply pr = ask(ctx, trace, pq);
      RunSelection psel;
      try {
        psel = parse_run_selection(pr.text, emap, static_cast<std::size_t>(count_p), pa, grid);
      } catch (const ParseError& e) {
        trace.record(event(scope, layer, SearchStep::PrimaryAxis, visit, b, EventKind::Rejected, id, parse_detail(e)));
        continue;
      }
      if (std::find(primary_tried.begin(), primary_tried.end(), psel.run) != primary_tried.end()) {
        trace.record(event(scope, layer, SearchStep::PrimaryAxis, visit, b, EventKind::Rejected, id, "repeated run"));
        continue;
      }
      primary_tried.push_back(psel.run);
      thought.primary = psel.run;
      thought.secondary.reset();
      trace.record(event(scope, layer, SearchStep::PrimaryAxis, visit, b, EventKind::Proposed, id,
                         fmt::format("{} {}..{}", to_string(pa), psel.run.start, psel.run.end() - 1)));
      const std::vector<int> across = secondary_cells(grid, cands, *side, psel.run);
      if (across.empty()) {
        trace.record(event(scope, layer, SearchStep::PrimaryAxis, visit, b, EventKind::Rejected, id,
                           "no free cells across the chosen run"));
        continue;
      }
      EmojiMap smap;
      try {
        smap = assign_emojis(across, ctx.vocabulary);
      } catch (const VocabularyExhausted& e) {
        trace.record(event(scope, layer, SearchStep::PrimaryAxis, visit, b, EventKind::Rejected, id, e.what()));
        continue;
      }
      const std::string sec_prompt = serialize_grid_prompt(grid, smap);
      std::vector<Run> secondary_tried;
      for (int c = 1; c <= k.axis; ++c) {
        CellsQuery cq{scope, sec_prompt, problem, *side, sa, psel.run, smap, count_s, secondary_tried, round, c};
        const OracleReply cr = ask(ctx, trace, cq);
        RunSelection ssel;
        try {
          ssel = parse_run_selection(cr.text, smap, static_cast<std::size_t>(count_s), sa, grid);
        } catch (const ParseError& e) {
          trace.record(
              event(scope, layer, SearchStep::SecondaryAxis, visit, c, EventKind::Rejected, id, parse_detail(e)));
          continue;
        }
        if (std::find(secondary_tried.begin(), secondary_tried.end(), ssel.run) != secondary_tried.end()) {
          trace.record(
              event(scope, layer, SearchStep::SecondaryAxis, visit, c, EventKind::Rejected, id, "repeated run"));
          continue;
        }
        secondary_tried.push_back(ssel.run);
        thought.secondary = ssel.run;
        trace.record(event(scope, layer, SearchStep::SecondaryAxis, visit, c, EventKind::Proposed, id,
                           fmt::format("{} {}..{}", to_string(sa), ssel.run.start, ssel.run.end() - 1)));
        // Every cell of the rectangle must be a candidate cell.
        const Run cols = columns_of(*side, psel.run, ssel.run);
        const Run rows = rows_of(*side, psel.run, ssel.run);
        bool all = cols.end() <= grid.cols && rows.end() <= grid.rows;
        for (int r = rows.start; r < rows.end() && all; ++r) {
          for (int col = cols.start; col < cols.end() && all; ++col) {
            all = std::binary_search(cands.begin(), cands.end(), grid.index(r, col));
          }
        }
        if (!all) {
          trace.record(event(scope, layer, SearchStep::SecondaryAxis, visit, c, EventKind::Rejected, id,
                             "cells not free"));
          continue;
        }
        const CandidatePlacement pose = resolve_placement(problem, *side, psel.run, ssel.run);
        const ThoughtVerdict v = evaluate_thought(problem, pose.center, pose.yaw);
        if (!v.ok) {
          trace.record(event(scope, layer, SearchStep::SecondaryAxis, visit, c, EventKind::Rejected, id, v.reason));
          continue;
        }
        thought.pose = pose;
        return thought;
      }
      trace.record(event(scope, layer, SearchStep::PrimaryAxis, visit, b, EventKind::Rejected, id,
                         "no completion along the chosen run"));
    }
    trace.record(event(scope, layer, SearchStep::Side, visit, a, EventKind::Rejected, id,
                       fmt::format("no completion on side {}", to_string(*side))));
  }
  thought.pose.reset();
  return thought;
}

SearchOutcome search_area(const SearchArea& area, const SearchContext& ctx) {
  ctx.config.validate();
  const auto order = layer_order(area);
  const Budgets k = budgets(ctx.config);
  const int n = static_cast<int>(order.size());
  SearchOutcome out;
  SearchTrace& trace = out.trace;

  struct Layer {
    int visit = 0;
    int used = 0;                      // attempts spent by the current node
    std::vector<Side> sides;           // sides tried by earlier attempts of the node
    std::vector<std::string> options;  // anchor options proposed so far
  };
  std::vector<Layer> layers(static_cast<std::size_t>(n));
  std::vector<PlacedObject> placed;
  std::optional<AnchorPlacement> anchor;
  auto budget = [&](int i) { return i == 0 ? k.anchor : k.other; };
  auto step_of = [](int i) { return i == 0 ? SearchStep::Anchor : SearchStep::Object; };

  int i = 0;
  layers[0].visit = 1;
  while (i < n) {
    Layer& L = layers[static_cast<std::size_t>(i)];
    const ObjectSpec& obj = *order[static_cast<std::size_t>(i)];
    if (L.used < budget(i)) {
      const int attempt = ++L.used;
      std::optional<PlacedObject> result;
      std::string detail;
      if (i == 0) {
        AnchorAttempt a = propose_anchor(area, obj, L.options, attempt, ctx, trace);
        if (!a.proposed.empty() && std::find(L.options.begin(), L.options.end(), a.proposed) == L.options.end()) {
          L.options.push_back(a.proposed);
        }
        if (a.pose) {
          result = PlacedObject{obj.id, {a.pose->center.x, a.pose->center.y, 0.0}, a.pose->yaw, {}};
          detail = a.pose->name;
        } else {
          detail = a.reason;
        }
      } else {
        PlacementProblem problem;
        problem.frame = area.frame;
        problem.placed = footprints(placed, order, area.anchor_id);
        problem.anchor = *anchor;
        problem.object = obj;
        problem.edge = edge_of(area, obj.id);
        problem.thresholds = ctx.config.thresholds;
        LocalThought t = local_place(problem, area.scope, i, L.visit, attempt, L.sides, ctx, trace);
        for (Side s : t.sides_tried) {
          if (!contains_side(L.sides, s)) L.sides.push_back(s);
        }
        if (t.pose) {
          result = PlacedObject{obj.id, {t.pose->center.x, t.pose->center.y, 0.0}, t.pose->yaw, {}};
          detail = fmt::format("side {}", to_string(t.pose->side));
        } else {
          detail = "local search failed";
        }
      }
      if (!result) {
        trace.record(event(area.scope, i, step_of(i), L.visit, attempt, EventKind::Rejected, obj.id, detail));
        continue;
      }
      TraceEvent e = event(area.scope, i, step_of(i), L.visit, attempt, EventKind::Accepted, obj.id, detail);
      e.pose = TracePose{result->center(), result->yaw};
      trace.record(std::move(e));
      if (i == 0) anchor = AnchorPlacement{obj.id, obj.category, obj.dims, result->center(), result->yaw};
      placed.push_back(*result);
      ++i;
      if (i < n) {
        Layer& next = layers[static_cast<std::size_t>(i)];
        next.visit += 1;
        next.used = 0;
        next.sides.clear();
        next.options.clear();
      }
      continue;
    }
    // Node budget spent: backtrack to the nearest ancestor with budget left.
    int j = i - 1;
    while (j >= 0 && layers[static_cast<std::size_t>(j)].used >= budget(j)) --j;
    if (j < 0) {
      trace.record(event(area.scope, i, step_of(i), L.visit, L.used, EventKind::Rejected, obj.id,
                         "budget exhausted"));
      // The partial state is discarded; its acceptances are voided.
      for (int l = static_cast<int>(placed.size()) - 1; l >= 0; --l) {
        trace.record(event(area.scope, l, step_of(l), layers[static_cast<std::size_t>(l)].visit,
                           layers[static_cast<std::size_t>(l)].used, EventKind::Rejected,
                           placed[static_cast<std::size_t>(l)].spec_id, "discarded: area unsat"));
      }
      out.solved = false;
      return out;
    }
    for (int l = i - 1; l >= j; --l) {
      const PlacedObject& p = placed.back();
      TraceEvent e = event(area.scope, l, step_of(l), layers[static_cast<std::size_t>(l)].visit,
                           layers[static_cast<std::size_t>(l)].used, EventKind::Backtrack, p.spec_id,
                           fmt::format("layer {} exhausted", i));
      e.pose = TracePose{p.center(), p.yaw};
      trace.record(std::move(e));
      placed.pop_back();
    }
    if (j == 0) anchor.reset();
    layers[static_cast<std::size_t>(j)].visit += 1;
    i = j;
  }
  out.solved = true;
  out.placed = std::move(placed);
  return out;
}

SearchOutcome plan_region(const RegionPlan& region, RegionWalls walls, const SearchContext& ctx) {
  return search_area(region_area(region, walls, ctx.config.cell_size), ctx);
}

SupportedOutcome place_supported(const ObjectSpec& supporter, const SupportedSet& set, const SearchContext& ctx) {
  SupportedOutcome out;
  if (set.objects.empty()) return out;
  SearchArea area;
  area.frame = {supporter.dims.length, supporter.dims.depth, ctx.config.cell_size / 5.0, RegionWalls{true, true}};
  area.objects = set.objects;
  area.anchor_id = set.anchor_id;
  area.anchor_rule = AnchorRule::InCenter;
  area.edges = set.edges;
  for (int pass = 0;; ++pass) {
    area.scope = pass == 0 ? "support:" + supporter.id : fmt::format("support:{}/retry{}", supporter.id, pass);
    SearchOutcome r = search_area(area, ctx);
    out.trace.append(r.trace);
    if (r.solved) {
      for (auto p : r.placed) {
        p.pos = {p.pos.x - supporter.dims.length / 2.0, p.pos.y - supporter.dims.depth / 2.0, supporter.dims.height};
        p.parent = {Parent::Kind::Supporter, supporter.id};
        out.placed.push_back(p);
      }
      return out;
    }
    // Drop the smallest object (the later one on ties); the anchor goes last.
    std::size_t victim = area.objects.size();
    for (std::size_t idx = 0; idx < area.objects.size(); ++idx) {
      if (area.objects[idx].id == area.anchor_id) continue;
      if (victim == area.objects.size() ||
          area.objects[idx].dims.footprint_area() <= area.objects[victim].dims.footprint_area()) {
        victim = idx;
      }
    }
    if (victim == area.objects.size()) {
      for (const auto& o : area.objects) {
        out.dropped.push_back(o.id);
        out.trace.record(event(area.scope, 0, SearchStep::Build, 0, 0, EventKind::Rejected, o.id,
                               "dropped: no placement on " + supporter.id));
      }
      return out;
    }
    const std::string victim_id = area.objects[victim].id;
    out.dropped.push_back(victim_id);
    out.trace.record(event(area.scope, 0, SearchStep::Build, 0, 0, EventKind::Rejected, victim_id,
                           "dropped: no placement on " + supporter.id));
    area.objects.erase(area.objects.begin() + static_cast<std::ptrdiff_t>(victim));
    area.edges.erase(std::remove_if(area.edges.begin(), area.edges.end(),
                                    [&](const Edge& e) { return e.object_id == victim_id; }),
                     area.edges.end());
  }
}

IoOutcome run_io_mode(const RoomPlan& plan, PlacementOracle& oracle) {
  IoOutcome out;
  out.trace.count_oracle_call();
  const OracleReply reply = oracle.query(FullLayoutQuery{plan});
  nlohmann::json doc;
  try {
    doc = extract_json_object(reply.text);
  } catch (const ParseError& e) {
    out.trace.record(event("io", 0, SearchStep::Layout, 1, 1, EventKind::Rejected, "", parse_detail(e)));
    return out;
  }
  if (!doc.contains("placements") || !doc["placements"].is_array()) {
    out.trace.record(event("io", 0, SearchStep::Layout, 1, 1, EventKind::Rejected, "", "parse: no placements"));
    return out;
  }
  // Supporter lookup for supported objects.
  std::map<std::string, std::pair<std::string, const ObjectSpec*>> owner;  // id -> (supporter id, spec)
  for (const auto& region : plan.regions) {
    for (const auto& o : region.objects) owner[o.id] = {"", &o};
    for (const auto& [sid, set] : region.supported) {
      for (const auto& o : set.objects) owner[o.id] = {sid, &o};
    }
  }
  std::map<std::string, std::size_t> index;
  std::vector<PlacedObject> placed;
  for (const auto& item : doc["placements"]) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string() || !item.contains("x") ||
        !item.contains("y") || !item["x"].is_number() || !item["y"].is_number()) {
      out.trace.record(event("io", 0, SearchStep::Layout, 1, 1, EventKind::Rejected, "", "parse: malformed entry"));
      continue;
    }
    const std::string id = item["id"].get<std::string>();
    auto it = owner.find(id);
    if (it == owner.end() || index.contains(id)) {
      out.trace.record(event("io", 0, SearchStep::Layout, 1, 1, EventKind::Rejected, id, "unknown or repeated id"));
      continue;
    }
    Yaw yaw = Yaw::Deg0;
    try {
      yaw = yaw_from_degrees(item.value("yaw", 0));
    } catch (const Error&) {
      out.trace.record(event("io", 0, SearchStep::Layout, 1, 1, EventKind::Rejected, id, "parse: bad yaw"));
      continue;
    }
    PlacedObject p{id, {item["x"].get<double>(), item["y"].get<double>(), 0.0}, yaw, {}};
    if (!it->second.first.empty()) p.parent = {Parent::Kind::Supporter, it->second.first};
    index[id] = placed.size();
    placed.push_back(p);
  }
  // Floor objects belong to the region containing their center; supported
  // objects rest at their supporter's height.
  for (auto& p : placed) {
    if (p.parent.kind == Parent::Kind::Supporter) {
      auto s = owner.find(p.parent.id);
      p.pos.z = s != owner.end() ? s->second.second->dims.height : 0.0;
      continue;
    }
    double x0 = 0.0;
    p.parent = {Parent::Kind::Floor, plan.regions.empty() ? "" : plan.regions.back().id};
    for (const auto& region : plan.regions) {
      if (p.pos.x < x0 + region.length) {
        p.parent.id = region.id;
        break;
      }
      x0 += region.length;
    }
  }
  for (const auto& p : placed) {
    TraceEvent e = event("io", 0, SearchStep::Layout, 1, 1, EventKind::Accepted, p.spec_id, "");
    e.pose = TracePose{p.center(), p.yaw};
    out.trace.record(std::move(e));
  }
  out.placed = std::move(placed);
  return out;
}

}  // namespace scenegen
