#include "traceexpr_cli/json_io.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <sstream>

namespace traceexpr::cli {

std::string rational_text(const Rational &r) { return r.to_fraction_string(); }

std::string machine_digest(const Machine &m) {
	const std::string text = print_machine(m);
	unsigned char md[EVP_MAX_MD_SIZE];
	unsigned int len = 0;
	EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
	std::ostringstream out;
	for(unsigned int i = 0; i < len; ++i) {
		out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
	}
	return out.str();
}

namespace {

std::string kind_name(MeasureResult::Kind k) {
	switch(k) {
	case MeasureResult::Kind::Run:
		return "run";
	case MeasureResult::Kind::Trace:
		return "trace";
	case MeasureResult::Kind::Collection:
		return "collection";
	}
	return "?";
}

json boxes(const std::vector<Box> &region) {
	json out = json::array();
	for(const auto &b : region) {
		json axes = json::array();
		for(const auto &iv : b.intervals()) {
			axes.push_back({rational_text(iv.lo), rational_text(iv.hi)});
		}
		out.push_back(axes);
	}
	return out;
}

std::string name_at(const std::vector<std::string> &names, std::size_t i) {
	return i < names.size() ? names[i] : std::to_string(i);
}

json trace_list(const std::vector<Trace> &traces, const MachineHeader &h) {
	json out = json::array();
	for(const auto &t : traces) {
		out.push_back(to_json(t, h));
	}
	return out;
}

} // namespace

json to_json(const MeasureResult &r) {
	json out{{"kind", kind_name(r.kind)}};
	if(r.exact()) {
		out["exact"] = rational_text(r.exact_value());
	} else {
		out["approx"] = r.approx();
		out["error_bound"] = r.error();
	}
	if(!r.region.empty()) {
		out["region"] = boxes(r.region);
	}
	if(r.empty_region) {
		out["empty_region"] = true;
	}
	return out;
}

json to_json(const Trace &t, const MachineHeader &h) {
	json steps = json::array();
	for(const auto &s : t.steps) {
		json step{{"action", name_at(h.actions, s.action)}};
		if(s.time) {
			step["time"] = rational_text(*s.time);
		}
		steps.push_back(step);
	}
	return {{"text", to_string(t, h)}, {"steps", steps}};
}

json to_json(const Run &r, const Machine &m) {
	const auto &h = header(m);
	const auto clocks = clock_names(m);
	json steps = json::array();
	for(const auto &s : r.steps) {
		json step{{"state", name_at(h.states, s.state)}, {"edge", s.edge}, {"action", name_at(h.actions, s.action)}};
		if(s.time) {
			step["time"] = rational_text(*s.time);
		}
		if(!s.clocks.empty()) {
			json c = json::object();
			for(std::size_t i = 0; i < s.clocks.size(); ++i) {
				c[i < clocks.size() ? clocks[i] : std::to_string(i)] = rational_text(s.clocks[i]);
			}
			step["clocks"] = c;
		}
		if(s.prob) {
			step["prob"] = rational_text(*s.prob);
		}
		steps.push_back(step);
	}
	return {{"text", to_string(r, m)}, {"start", name_at(h.states, r.start)}, {"steps", steps}};
}

json to_json(const Violation &v) { return {{"location", v.location}, {"message", v.message}}; }

json to_json(const Diagnostic &d) {
	json out{{"severity", "error"}, {"message", d.message}, {"location", d.span.to_string()}};
	if(!d.related.empty()) {
		json rel = json::array();
		for(const auto &r : d.related) {
			rel.push_back(r.to_string());
		}
		out["related"] = rel;
	}
	return out;
}

json to_json(const TranslationReport &r, const Machine &source) {
	const auto &sh = header(source);
	const auto &th = header(r.target);
	json origin = json::object();
	for(const auto &[t, s] : r.state_origin) {
		origin[name_at(th.states, t)] = name_at(sh.states, s);
	}
	json actions = json::object();
	for(const auto &[s, t] : r.action_map) {
		actions[name_at(sh.actions, s)] = name_at(th.actions, t);
	}
	json out{{"source_class", class_keyword(machine_class(source))},
	         {"target_class", class_keyword(machine_class(r.target))},
	         {"state_origin", origin},
	         {"action_map", actions},
	         {"notes", r.notes},
	         {"machine", print_machine(MachineDoc{r.target, r.weighting})}};
	return out;
}

namespace {

json certificate_json(const Certificate &c, const Machine &left, const Machine &right) {
	static const char *kinds[] = {"structural", "measure_mismatch", "multiplicative"};
	json out{{"kind", kinds[static_cast<int>(c.kind)]}, {"reason", c.reason}};
	if(c.mismatch) {
		out["left"] = to_json(c.mismatch->left, header(left));
		out["right"] = to_json(c.mismatch->right, header(right));
		out["left_measure"] = to_json(c.mismatch->left_measure);
		out["right_measure"] = to_json(c.mismatch->right_measure);
	}
	if(c.obstruction) {
		const auto &o = *c.obstruction;
		const Machine &side = o.left_side ? left : right;
		out["side"] = o.left_side ? "left" : "right";
		out["traces"] = trace_list(o.traces, header(side));
		out["exponents"] = o.exponents;
		json ms = json::array();
		for(const auto &m : o.measures) {
			ms.push_back(rational_text(m));
		}
		out["measures"] = ms;
		out["product"] = rational_text(o.product);
	}
	return out;
}

} // namespace

json to_json(const IsoResult &r, const Machine &left, const Machine &right) {
	json out{{"verdict", std::string(to_string(r.verdict))}, {"nodes", r.nodes}};
	if(r.witness) {
		const auto &w = *r.witness;
		json actions = json::object();
		for(const auto &[a, b] : w.actions.mapping) {
			actions[name_at(header(left).actions, a)] = name_at(header(right).actions, b);
		}
		json wj{{"actions", actions}, {"pairs", w.alpha.size()}};
		if(w.time) {
			json t = json::array();
			for(const auto &[a, b] : w.time->pairs) {
				t.push_back({rational_text(a), rational_text(b)});
			}
			wj["time"] = t;
		}
		out["witness"] = wj;
	}
	json certs = json::array();
	for(const auto &c : r.certificates) {
		certs.push_back(certificate_json(c, left, right));
	}
	out["certificates"] = certs;
	return out;
}

json to_json(const PtaStrictnessCertificate &c) {
	return {{"machine", print_machine(cycle_tapd())},
	        {"single", rational_text(c.single)},
	        {"doubled", rational_text(c.doubled)},
	        {"single_squared", rational_text(c.single_squared)},
	        {"inequality", rational_text(c.single_squared) + (c.valid ? " != " : " == ") + rational_text(c.doubled)},
	        {"valid", c.valid}};
}

json to_json(const TapdStrictnessCertificate &c) {
	json rows = json::array();
	for(const auto &r : c.rows) {
		rows.push_back({{"degree", r.degree},
		                {"truncated_integral", rational_text(r.truncated_integral)},
		                {"reference", {{"approx", r.reference.value}, {"error_bound", r.reference.error}}},
		                {"gap", r.gap},
		                {"lower_bound", rational_text(r.lower_bound)},
		                {"upper_bound", rational_text(r.upper_bound)},
		                {"exceeds_tol", r.exceeds_tol}});
	}
	return {{"max_degree", c.max_degree},   {"tol", rational_text(c.tol)},       {"rows", rows},
	        {"threshold", c.threshold},     {"decreasing", c.decreasing},       {"consistent", c.consistent},
	        {"degenerate", c.degenerate},   {"valid", c.valid}};
}

json machine_entry(const Machine &m, const std::string &path) {
	const auto &h = header(m);
	return {{"path", path},
	        {"name", h.name},
	        {"class", class_keyword(machine_class(m))},
	        {"states", h.states.size()},
	        {"edges", edge_count(m)},
	        {"digest", machine_digest(m)}};
}

namespace {

void render(const json &v, int indent, std::ostringstream &out) {
	const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
	if(v.is_object()) {
		for(const auto &[k, x] : v.items()) {
			if(x.is_structured() && !x.empty()) {
				out << pad << k << ":\n";
				render(x, indent + 1, out);
			} else if(x.is_string() && x.get<std::string>().find('\n') != std::string::npos) {
				out << pad << k << ": |\n";
				std::istringstream lines(x.get<std::string>());
				std::string line;
				while(std::getline(lines, line)) {
					out << pad << "  " << line << "\n";
				}
			} else {
				out << pad << k << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
			}
		}
	} else if(v.is_array()) {
		for(const auto &x : v) {
			if(x.is_object()) {
				out << pad << "-\n";
				render(x, indent + 1, out);
			} else if(x.is_array()) {
				out << pad << "- " << x.dump() << "\n";
			} else if(x.is_string()) {
				const auto s = x.get<std::string>();
				if(s.find('\n') != std::string::npos) {
					std::istringstream lines(s);
					std::string line;
					while(std::getline(lines, line)) {
						out << pad << "  " << line << "\n";
					}
				} else {
					out << pad << "- " << s << "\n";
				}
			} else {
				out << pad << "- " << x.dump() << "\n";
			}
		}
	} else {
		out << pad << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
	}
}

} // namespace

std::string pretty(const json &doc) {
	std::ostringstream out;
	render(doc, 0, out);
	return out.str();
}

} // namespace traceexpr::cli
