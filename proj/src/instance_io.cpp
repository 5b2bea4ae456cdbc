#include "ordmed/instance_io.hpp"

#include <algorithm>
#include <fstream>

namespace ordmed {

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InvalidInstance("rationals must be integers or \"p/q\" strings, got " + j.dump());
}

Json rational_to_json(const Rational& q) {
  if (is_integral(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

namespace {

std::vector<std::string> ids_from_json(const Json& arr) {
  std::vector<std::string> out;
  for (const auto& x : arr) out.push_back(x.is_string() ? x.get<std::string>() : x.dump());
  return out;
}

std::vector<Rational> rationals_from_json(const Json& arr) {
  std::vector<Rational> out;
  for (const auto& x : arr) out.push_back(rational_from_json(x));
  return out;
}

Json rationals_to_json(const std::vector<Rational>& v) {
  Json arr = Json::array();
  for (const auto& q : v) arr.push_back(rational_to_json(q));
  return arr;
}

std::uint64_t mask_of(const Json& arr) {
  std::uint64_t m = 0;
  for (const auto& i : arr) m |= std::uint64_t{1} << i.get<int>();
  return m;
}

}  // namespace

Instance instance_from_json(const Json& doc) {
  Instance inst;
  try {
    inst.facility_ids = ids_from_json(doc.at("facilities"));
    inst.client_ids = ids_from_json(doc.at("clients"));
    const int nf = static_cast<int>(inst.facility_ids.size());
    const int nc = static_cast<int>(inst.client_ids.size());
    const auto& dist = doc.at("dist");
    if (dist.contains("matrix")) {
      std::vector<Rational> flat;
      for (const auto& row : dist.at("matrix")) {
        if (static_cast<int>(row.size()) != nf + nc) throw InvalidInstance("matrix row length mismatch");
        for (const auto& x : row) flat.push_back(rational_from_json(x));
      }
      inst.metric = Metric(nf, nc, std::move(flat));
    } else if (dist.contains("points_l1")) {
      std::vector<std::pair<Rational, Rational>> pts;
      for (const auto& p : dist.at("points_l1")) pts.emplace_back(rational_from_json(p.at(0)), rational_from_json(p.at(1)));
      inst.metric = Metric::from_points_l1(nf, nc, pts);
    } else {
      throw InvalidInstance("dist needs a 'matrix' or 'points_l1' entry");
    }
    inst.w = rationals_from_json(doc.at("weights"));

    const auto& v = doc.at("variant");
    if (v.contains("robust")) {
      inst.variant = RobustSpec{v["robust"].at("k").get<int>(), v["robust"].at("m").get<int>()};
    } else if (v.contains("matroid")) {
      const auto& mj = v["matroid"];
      MatroidSpec mat;
      if (mj.contains("partition")) {
        mat.kind = MatroidSpec::Kind::partition;
        for (const auto& part : mj["partition"].at("parts")) mat.parts.push_back(part.get<std::vector<int>>());
        mat.capacities = mj["partition"].at("capacities").get<std::vector<int>>();
      } else {
        mat.kind = MatroidSpec::Kind::explicit_table;
        for (const auto& s : mj.at("independent")) mat.independent.push_back(mask_of(s));
        std::sort(mat.independent.begin(), mat.independent.end());
      }
      inst.variant = std::move(mat);
    } else if (v.contains("knapsack")) {
      inst.variant = KnapsackSpec{rationals_from_json(v["knapsack"].at("wt")), rational_from_json(v["knapsack"].at("W"))};
    } else if (v.contains("fault_tolerant")) {
      inst.variant = FaultSpec{v["fault_tolerant"].at("k").get<int>(), v["fault_tolerant"].at("r").get<std::vector<int>>()};
    } else {
      throw InvalidInstance("unknown variant block");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("malformed instance document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidInstance(e.what());
  }
  validate_instance(inst);
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["facilities"] = inst.facility_ids;
  doc["clients"] = inst.client_ids;
  Json rows = Json::array();
  for (int u = 0; u < inst.metric.n_points(); ++u) {
    Json row = Json::array();
    for (int v = 0; v < inst.metric.n_points(); ++v) row.push_back(rational_to_json(inst.metric.at(u, v)));
    rows.push_back(std::move(row));
  }
  doc["dist"] = {{"matrix", std::move(rows)}};
  doc["weights"] = rationals_to_json(inst.w);
  Json v;
  switch (inst.kind()) {
    case VariantKind::robust: v["robust"] = {{"k", inst.robust().k}, {"m", inst.robust().m}}; break;
    case VariantKind::matroid: {
      const auto& mat = inst.matroid();
      if (mat.kind == MatroidSpec::Kind::partition) {
        v["matroid"]["partition"] = {{"parts", mat.parts}, {"capacities", mat.capacities}};
      } else {
        Json table = Json::array();
        for (auto s : mat.independent) {
          Json set = Json::array();
          for (int i = 0; i < 64; ++i)
            if (s >> i & 1U) set.push_back(i);
          table.push_back(std::move(set));
        }
        v["matroid"]["independent"] = std::move(table);
      }
      break;
    }
    case VariantKind::knapsack:
      v["knapsack"] = {{"wt", rationals_to_json(inst.knapsack().wt)}, {"W", rational_to_json(inst.knapsack().budget)}};
      break;
    case VariantKind::fault_tolerant: v["fault_tolerant"] = {{"k", inst.fault().k}, {"r", inst.fault().r}}; break;
  }
  doc["variant"] = std::move(v);
  return doc;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInstance("cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << instance_to_json(inst).dump(1) << '\n';
}

Json solution_to_json(const Instance& inst, const Solution& sol) {
  Json doc;
  Json open = Json::array();
  for (int i : sol.open) open.push_back(inst.facility_ids[i]);
  Json served = Json::array(), assign = Json::object();
  for (std::size_t s = 0; s < sol.served.size(); ++s) {
    const auto& cid = inst.client_ids[sol.served[s]];
    served.push_back(cid);
    Json fs = Json::array();
    if (s < sol.assignment.size())
      for (int i : sol.assignment[s]) fs.push_back(inst.facility_ids[i]);
    assign[cid] = std::move(fs);
  }
  doc["open"] = std::move(open);
  doc["served"] = std::move(served);
  doc["assignment"] = std::move(assign);
  return doc;
}

}  // namespace ordmed
