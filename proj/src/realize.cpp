#include "hvseg/realize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hvseg {

namespace {

std::map<Id, long long> rank2(const Order& order) {
  std::map<Id, long long> r;
  for (std::size_t i = 0; i < order.size(); ++i)
    r[order[i]] = 2 * static_cast<long long>(i + 1);
  return r;
}

// Pixel value of a doubled coordinate at `scale` px per grid unit; prints
// ".5" only when the value is not integral, so output is byte-stable.
std::string px(long long doubled, int scale) {
  long long twice = doubled * scale;  // pixels, doubled
  std::ostringstream os;
  os << twice / 2;
  if (twice % 2 != 0) os << ".5";
  return os.str();
}

}  // namespace

SegmentArrangement realize_segments(const SegInstance& instance,
                                    const Order& sigma_v) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("realize_segments: invalid instance: " +
                                report.summary());
  if (!is_permutation_of(
          sigma_v, IdSet(instance.verticals.begin(), instance.verticals.end())))
    throw std::invalid_argument(
        "realize_segments: sigma_v is not a permutation of the verticals");

  auto hy = rank2(instance.sigma_h);
  auto vx = rank2(sigma_v);
  long long h_margin = 2 * static_cast<long long>(sigma_v.size() + 1);
  long long v_margin = 2 * static_cast<long long>(instance.sigma_h.size() + 1);

  std::map<Id, std::pair<long long, long long>> h_span, v_span;
  for (const auto& [h, v] : instance.edges) {
    long long x = vx.at(v), y = hy.at(h);
    auto [hit, hnew] = h_span.emplace(h, std::make_pair(x, x));
    if (!hnew) {
      hit->second.first = std::min(hit->second.first, x);
      hit->second.second = std::max(hit->second.second, x);
    }
    auto [vit, vnew] = v_span.emplace(v, std::make_pair(y, y));
    if (!vnew) {
      vit->second.first = std::min(vit->second.first, y);
      vit->second.second = std::max(vit->second.second, y);
    }
  }

  SegmentArrangement arr;
  for (const auto& h : instance.sigma_h) {
    auto it = h_span.find(h);
    if (it != h_span.end())
      arr.horizontals.push_back(
          {h, hy.at(h), it->second.first - 1, it->second.second + 1});
    else  // degree-0: half-unit stub in the margin band
      arr.horizontals.push_back({h, hy.at(h), h_margin, h_margin + 1});
  }
  for (const auto& v : sigma_v) {
    auto it = v_span.find(v);
    if (it != v_span.end())
      arr.verticals.push_back(
          {v, vx.at(v), it->second.first - 1, it->second.second + 1});
    else
      arr.verticals.push_back({v, vx.at(v), v_margin, v_margin + 1});
  }

  for (const auto& hs : arr.horizontals)
    for (const auto& vs : arr.verticals)
      if (hs.x_lo < vs.x && vs.x < hs.x_hi && vs.y_lo < hs.y &&
          hs.y < vs.y_hi)
        arr.intersections.emplace(hs.id, vs.id);

  std::set_difference(arr.intersections.begin(), arr.intersections.end(),
                      instance.edges.begin(), instance.edges.end(),
                      std::inserter(arr.unwanted, arr.unwanted.end()));
  std::set_difference(instance.edges.begin(), instance.edges.end(),
                      arr.intersections.begin(), arr.intersections.end(),
                      std::inserter(arr.missing, arr.missing.end()));
  return arr;
}

LevelDrawing layout_level_drawing(const LevelInstance& instance,
                                  const LevelWitness& witness) {
  if (witness.orders.size() !=
      static_cast<std::size_t>(instance.num_levels))
    throw std::invalid_argument(
        "layout_level_drawing: one order per level required");
  LevelDrawing d;
  for (std::size_t i = 0; i < witness.orders.size(); ++i)
    for (std::size_t j = 0; j < witness.orders[i].size(); ++j)
      d.pos[witness.orders[i][j]] = {static_cast<long long>(j + 1),
                                     static_cast<long long>(i + 1)};
  d.edges = instance.edges;
  // Straight y-monotone edges between the same adjacent levels cross iff
  // their endpoint ranks are inverted.
  std::vector<std::pair<Id, Id>> es(d.edges.begin(), d.edges.end());
  for (std::size_t a = 0; a < es.size(); ++a)
    for (std::size_t b = a + 1; b < es.size(); ++b) {
      if (instance.level.at(es[a].first) != instance.level.at(es[b].first))
        continue;
      auto la = d.pos.at(es[a].first).first, lb = d.pos.at(es[b].first).first;
      auto ua = d.pos.at(es[a].second).first,
           ub = d.pos.at(es[b].second).first;
      if ((la < lb && ua > ub) || (la > lb && ua < ub)) ++d.crossings;
    }
  return d;
}

LevelDrawing realize_level_drawing(const LevelInstance& instance,
                                   const LevelWitness& witness) {
  auto check = check_witness(instance, witness);
  if (!check.ok)
    throw std::invalid_argument("realize_level_drawing: rejected witness: " +
                                check.detail);
  auto d = layout_level_drawing(instance, witness);
  if (d.crossings != 0)
    throw std::logic_error(
        "realize_level_drawing: accepted witness drew a crossing");
  return d;
}

std::string emit_svg(const SegmentArrangement& arrangement,
                     const SvgStyle& style) {
  long long max_x = 2, max_y = 2;
  for (const auto& h : arrangement.horizontals) {
    max_x = std::max(max_x, h.x_hi);
    max_y = std::max(max_y, h.y);
  }
  for (const auto& v : arrangement.verticals) {
    max_x = std::max(max_x, v.x);
    max_y = std::max(max_y, v.y_hi);
  }
  long long height = max_y + 2;  // one-unit padding, doubled
  auto X = [&](long long x) { return px(x + 2, style.scale); };
  auto Y = [&](long long y) { return px(height - y, style.scale); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << px(max_x + 4, style.scale) << "\" height=\""
     << px(height + 2, style.scale) << "\">\n";
  std::map<Id, const SegmentArrangement::HSeg*> hs;
  std::map<Id, const SegmentArrangement::VSeg*> vs;
  for (const auto& h : arrangement.horizontals) {
    hs[h.id] = &h;
    os << "  <line x1=\"" << X(h.x_lo) << "\" y1=\"" << Y(h.y) << "\" x2=\""
       << X(h.x_hi) << "\" y2=\"" << Y(h.y)
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    os << "  <text x=\"" << X(h.x_lo) << "\" y=\"" << Y(h.y + 1)
       << "\" font-size=\"12\">" << h.id << "</text>\n";
  }
  for (const auto& v : arrangement.verticals) {
    vs[v.id] = &v;
    os << "  <line x1=\"" << X(v.x) << "\" y1=\"" << Y(v.y_lo) << "\" x2=\""
       << X(v.x) << "\" y2=\"" << Y(v.y_hi)
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    os << "  <text x=\"" << X(v.x + 1) << "\" y=\"" << Y(v.y_hi)
       << "\" font-size=\"12\">" << v.id << "</text>\n";
  }
  for (const auto& [h, v] : arrangement.unwanted)
    os << "  <circle class=\"unwanted\" cx=\"" << X(vs.at(v)->x) << "\" cy=\""
       << Y(hs.at(h)->y)
       << "\" r=\"6\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
  for (const auto& [h, v] : arrangement.missing)
    os << "  <circle class=\"missing\" cx=\"" << X(vs.at(v)->x) << "\" cy=\""
       << Y(hs.at(h)->y)
       << "\" r=\"6\" fill=\"none\" stroke=\"orange\" stroke-dasharray=\"3\" "
          "stroke-width=\"2\"/>\n";
  os << "</svg>\n";
  return os.str();
}

std::string emit_svg(const LevelDrawing& drawing, const SvgStyle& style) {
  long long max_x = 1, max_y = 1;
  for (const auto& [id, p] : drawing.pos) {
    max_x = std::max(max_x, p.first);
    max_y = std::max(max_y, p.second);
  }
  auto X = [&](long long x) { return px(2 * x + 2, style.scale); };
  auto Y = [&](long long y) { return px(2 * (max_y - y) + 2, style.scale); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << px(2 * max_x + 4, style.scale) << "\" height=\""
     << px(2 * max_y + 2, style.scale) << "\">\n";
  for (const auto& [a, b] : drawing.edges)
    os << "  <line x1=\"" << X(drawing.pos.at(a).first) << "\" y1=\""
       << Y(drawing.pos.at(a).second) << "\" x2=\""
       << X(drawing.pos.at(b).first) << "\" y2=\""
       << Y(drawing.pos.at(b).second)
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (const auto& [id, p] : drawing.pos) {
    os << "  <circle cx=\"" << X(p.first) << "\" cy=\"" << Y(p.second)
       << "\" r=\"4\" fill=\"black\"/>\n";
    os << "  <text x=\"" << X(p.first) << "\" y=\"" << Y(p.second)
       << "\" dx=\"6\" dy=\"-6\" font-size=\"12\">" << id << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hvseg
