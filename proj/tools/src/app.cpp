#include "traceexpr_cli/app.hpp"

#include "traceexpr_cli/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace traceexpr::cli {

namespace {

/// Input problem reported as a usage error (exit 3).
class UsageError : public Error {
public:
	using Error::Error;
};

struct Options {
	std::size_t depth = 3;
	std::string time_grid;
	std::string weights;
	std::string right_weights;
	std::string mode;
	std::string tol;
	std::size_t budget = 200'000;
	std::string format = "json";
	bool all_lengths = false;
	bool untimed = false;
	std::string trace;
	std::string path;
	std::string target;
	std::string emit;
	std::string time_mode = "auto";
	std::string certificate;
	unsigned max_degree = 8;
	std::vector<std::string> files;
};

struct Outcome {
	json result = json::object();
	std::string verdict = "ok";
	int code = kSuccess;
};

struct Loaded {
	std::string path;
	MachineDoc doc;
};

class Command {
public:
	Command(std::string name, const Options &opt, std::vector<std::string> args)
	    : name_(std::move(name)), opt_(opt), args_(std::move(args)) {}

	int execute(std::ostream &out, std::ostream &err) {
		Outcome o;
		try {
			o = dispatch();
		} catch(const ParseError &e) {
			for(const auto &d : e.diagnostics()) {
				diagnostics_.push_back(to_json(d));
				if(!current_file_.empty()) {
					diagnostics_.back()["file"] = current_file_;
				}
				err << d.to_string(current_file_) << "\n";
			}
			o = {json::object(), "error", kUsage};
		} catch(const std::exception &e) {
			diagnostics_.push_back({{"severity", "error"}, {"message", e.what()}});
			err << "error: " << e.what() << "\n";
			o = {json::object(), "error", kUsage};
		}
		json doc{{"schema_version", kSchemaVersion},
		         {"command", {{"name", name_}, {"args", args_}}},
		         {"machines", machines_},
		         {"result", o.result},
		         {"verdict", o.verdict},
		         {"diagnostics", diagnostics_}};
		out << (opt_.format == "pretty" ? pretty(doc) : doc.dump(2) + "\n");
		return o.code;
	}

private:
	Outcome dispatch() {
		if(name_ == "validate") {
			return validate_cmd();
		}
		if(name_ == "runs") {
			return runs_cmd();
		}
		if(name_ == "traces") {
			return traces_cmd();
		}
		if(name_ == "measure") {
			return measure_cmd();
		}
		if(name_ == "translate") {
			return translate_cmd();
		}
		if(name_ == "iso") {
			return iso_cmd();
		}
		return certify_cmd();
	}

	void note(const std::string &message) { diagnostics_.push_back({{"severity", "note"}, {"message", message}}); }

	static std::string read_file(const std::string &path) {
		std::ifstream in(path, std::ios::binary);
		if(!in) {
			throw UsageError("cannot read '" + path + "'");
		}
		std::ostringstream s;
		s << in.rdbuf();
		return s.str();
	}

	Loaded load(const std::string &path, const std::string &weights_path) {
		current_file_ = path;
		Loaded l{path, parse_machine(read_file(path))};
		if(!weights_path.empty()) {
			current_file_ = weights_path;
			l.doc.weights = parse_weighting(read_file(weights_path), l.doc.machine);
		}
		current_file_.clear();
		if(!opt_.mode.empty()) {
			auto *d = std::get_if<PolyDelayAutomaton>(&l.doc.machine);
			if(!d) {
				throw UsageError("--mode applies to tapd machines only");
			}
			d->mode = opt_.mode == "normalized" ? ProbabilityMode::Normalized : ProbabilityMode::Direct;
		}
		machines_.push_back(machine_entry(l.doc.machine, path));
		return l;
	}

	Loaded load_single() { return load(opt_.files.at(0), opt_.weights); }

	QuadratureConfig quadrature() const {
		QuadratureConfig q = QuadratureConfig::from_environment();
		if(!opt_.tol.empty()) {
			q.tol = Rational::parse(opt_.tol);
			if(q.tol.sign() <= 0) {
				throw UsageError("--tol must be positive");
			}
		}
		return q;
	}

	/// Empty when the machine needs a weighting and has none.
	std::optional<MeasureContext> context(const MachineDoc &doc) const {
		MeasureContext ctx;
		ctx.quadrature = quadrature();
		const MachineClass c = machine_class(doc.machine);
		if(c == MachineClass::Nfa || c == MachineClass::Ta) {
			if(!doc.weights) {
				return std::nullopt;
			}
			const auto problems = check_weighting(doc.machine, *doc.weights);
			if(!problems.empty()) {
				std::string msg = "inadmissible weighting:";
				for(const auto &p : problems) {
					msg += " " + p + ";";
				}
				throw UsageError(msg);
			}
			ctx.weights = doc.weights;
		}
		return ctx;
	}

	MeasureContext require_context(const MachineDoc &doc) const {
		auto ctx = context(doc);
		if(!ctx) {
			throw UsageError("nfa and ta machines need a weighting (weights block or --weights)");
		}
		return *ctx;
	}

	std::optional<TimeSampling> sampling(const Machine &m) const {
		if(!is_timed(machine_class(m))) {
			return std::nullopt;
		}
		if(opt_.time_grid.empty()) {
			return CriticalDelays{};
		}
		const auto colon = opt_.time_grid.find(':');
		TimeGrid g;
		g.step = Rational::parse(opt_.time_grid.substr(0, colon));
		g.horizon = colon == std::string::npos ? Rational(static_cast<long>(std::max<std::size_t>(opt_.depth, 1)))
		                                       : Rational::parse(opt_.time_grid.substr(colon + 1));
		if(g.step.sign() <= 0 || g.horizon.sign() <= 0) {
			throw UsageError("--time-grid needs a positive step and horizon");
		}
		return g;
	}

	/// Violations as a failing outcome, or nothing when the machine is valid.
	std::optional<Outcome> invalid(const Machine &m) {
		const auto violations = validate(m);
		if(violations.empty()) {
			return std::nullopt;
		}
		Outcome o;
		json list = json::array();
		for(const auto &v : violations) {
			list.push_back(to_json(v));
		}
		o.result["violations"] = list;
		o.verdict = "invalid";
		o.code = kNegative;
		return o;
	}

	Outcome validate_cmd() {
		const Loaded l = load_single();
		if(auto bad = invalid(l.doc.machine)) {
			return *bad;
		}
		Outcome o;
		o.result["violations"] = json::array();
		if(l.doc.weights) {
			const auto problems = check_weighting(l.doc.machine, *l.doc.weights);
			if(!problems.empty()) {
				o.result["weighting_problems"] = problems;
				o.verdict = "invalid";
				o.code = kNegative;
				return o;
			}
		}
		o.verdict = "valid";
		return o;
	}

	Outcome runs_cmd() {
		const Loaded l = load_single();
		if(auto bad = invalid(l.doc.machine)) {
			return *bad;
		}
		const Machine &m = l.doc.machine;
		auto ctx = context(l.doc);
		if(!ctx) {
			note("measures omitted: nfa and ta machines need a weighting");
		}
		const auto runs = enumerate_runs(m, opt_.depth, sampling(m), {opt_.all_lengths});
		std::optional<MeasureEngine> engine;
		if(ctx) {
			engine.emplace(m, *ctx);
		}
		json list = json::array();
		for(const auto &r : runs) {
			json j = to_json(r, m);
			if(engine) {
				j["measure"] = to_json(engine->run(r));
			}
			list.push_back(j);
		}
		Outcome o;
		o.result = {{"depth", opt_.depth}, {"count", runs.size()}, {"runs", list}};
		return o;
	}

	TraceCollection collect_traces(const Machine &m) const {
		if(opt_.untimed || !is_timed(machine_class(m))) {
			TraceCollection all;
			const std::size_t from = opt_.all_lengths ? 0 : opt_.depth;
			for(std::size_t len = from; len <= opt_.depth; ++len) {
				auto part = untimed_traces(m, len);
				all.insert(all.end(), part.begin(), part.end());
			}
			return all;
		}
		return traces_of(m, opt_.depth, sampling(m), {opt_.all_lengths});
	}

	Outcome traces_cmd() {
		const Loaded l = load_single();
		if(auto bad = invalid(l.doc.machine)) {
			return *bad;
		}
		const Machine &m = l.doc.machine;
		auto ctx = context(l.doc);
		if(!ctx) {
			note("measures omitted: nfa and ta machines need a weighting");
		}
		const auto traces = collect_traces(m);
		std::optional<MeasureEngine> engine;
		if(ctx) {
			engine.emplace(m, *ctx);
		}
		json list = json::array();
		for(const auto &t : traces) {
			json j = to_json(t, header(m));
			if(engine) {
				j["measure"] = to_json(engine->trace(t));
			}
			list.push_back(j);
		}
		Outcome o;
		o.result = {{"depth", opt_.depth}, {"count", traces.size()}, {"traces", list}};
		return o;
	}

	static std::vector<std::string> split(const std::string &s) {
		std::vector<std::string> out;
		std::string item;
		std::istringstream in(s);
		while(std::getline(in, item, ',')) {
			const auto b = item.find_first_not_of(" \t");
			const auto e = item.find_last_not_of(" \t");
			if(b != std::string::npos) {
				out.push_back(item.substr(b, e - b + 1));
			}
		}
		return out;
	}

	Trace parse_trace(const Machine &m) const {
		const auto &actions = header(m).actions;
		Trace t{machine_class(m), {}};
		for(const auto &tok : split(opt_.trace)) {
			const auto at = tok.find('@');
			const std::string name = tok.substr(0, at);
			const auto it = std::find(actions.begin(), actions.end(), name);
			if(it == actions.end()) {
				throw UsageError("unknown action '" + name + "'");
			}
			TraceStep step{static_cast<ActionId>(it - actions.begin()), std::nullopt};
			if(at != std::string::npos) {
				step.time = Rational::parse(tok.substr(at + 1));
			}
			t.steps.push_back(step);
		}
		return t;
	}

	std::vector<EdgeRef> parse_path(const Machine &m) const {
		std::vector<EdgeRef> edges;
		for(const auto &tok : split(opt_.path)) {
			if(tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9) {
				throw UsageError("edge index expected, got '" + tok + "'");
			}
			edges.push_back(std::stoul(tok));
		}
		StateId at = header(m).start;
		for(EdgeRef e : edges) {
			if(e >= edge_count(m)) {
				throw UsageError("no edge with index " + std::to_string(e));
			}
			const EdgeView v = edge_view(m, e);
			if(v.source != at) {
				throw UsageError("edge " + std::to_string(e) + " does not leave state '" + header(m).states[at] + "'");
			}
			at = v.target;
		}
		return edges;
	}

	Outcome measure_cmd() {
		const Loaded l = load_single();
		if(auto bad = invalid(l.doc.machine)) {
			return *bad;
		}
		const Machine &m = l.doc.machine;
		MeasureEngine engine(m, require_context(l.doc));
		Outcome o;
		if(!opt_.trace.empty()) {
			const Trace t = parse_trace(m);
			o.result = {{"trace", to_json(t, header(m))}, {"measure", to_json(engine.trace(t))}};
		} else if(!opt_.path.empty()) {
			const auto edges = parse_path(m);
			o.result = {{"path", edges}, {"measure", to_json(engine.run_edges(edges))}};
		} else {
			const auto traces = untimed_traces(m, opt_.depth);
			o.result = {{"depth", opt_.depth}, {"members", traces.size()}, {"measure", to_json(engine.collection(traces))}};
		}
		return o;
	}

	Outcome translate_cmd() {
		const Loaded l = load_single();
		if(auto bad = invalid(l.doc.machine)) {
			return *bad;
		}
		const auto target = class_from_keyword(opt_.target);
		if(!target) {
			throw UsageError("unknown target class '" + opt_.target + "'");
		}
		const auto report = translate(l.doc.machine, *target, l.doc.weights);
		if(!opt_.emit.empty()) {
			std::ofstream f(opt_.emit, std::ios::binary);
			if(!f) {
				throw UsageError("cannot write '" + opt_.emit + "'");
			}
			f << print_machine(MachineDoc{report.target, report.weighting});
		}
		machines_.push_back(machine_entry(report.target, opt_.emit));
		Outcome o;
		o.result = to_json(report, l.doc.machine);
		return o;
	}

	Outcome iso_cmd() {
		if(opt_.files.size() != 2) {
			throw UsageError("iso needs two machine files");
		}
		const Loaded a = load(opt_.files[0], opt_.weights);
		const Loaded b = load(opt_.files[1], opt_.right_weights);
		for(const auto *l : {&a, &b}) {
			if(auto bad = invalid(l->doc.machine)) {
				return *bad;
			}
		}
		ExpressOptions eo;
		eo.depth = opt_.depth;
		eo.left = require_context(a.doc);
		eo.right = require_context(b.doc);
		eo.budget = opt_.budget;
		if(auto s = sampling(a.doc.machine)) {
			eo.sampling = *s;
		}
		eo.time_mode = opt_.time_mode == "timed"     ? ExpressOptions::TimeMode::Timed
		               : opt_.time_mode == "untimed" ? ExpressOptions::TimeMode::Untimed
		                                             : ExpressOptions::TimeMode::Auto;
		const IsoResult r = expresses(a.doc.machine, b.doc.machine, eo);
		Outcome o;
		o.result = to_json(r, a.doc.machine, b.doc.machine);
		o.result["depth"] = opt_.depth;
		o.verdict = std::string(to_string(r.verdict));
		o.code = r.verdict == Verdict::Yes ? kSuccess : r.verdict == Verdict::No ? kNegative : kInconclusive;
		return o;
	}

	Outcome certify_cmd() {
		Outcome o;
		if(opt_.certificate == "pta-strictness") {
			const auto c = certify_pta_strictness();
			o.result = to_json(c);
			o.verdict = c.valid ? "strict" : "not_certified";
			o.code = c.valid ? kSuccess : kNegative;
			return o;
		}
		const Rational tol = opt_.tol.empty() ? Rational(1, 1'000'000) : Rational::parse(opt_.tol);
		const auto c = certify_tapd_strictness(opt_.max_degree, tol);
		o.result = to_json(c);
		o.verdict = c.valid ? "strict" : c.degenerate ? "degenerate" : "not_certified";
		o.code = c.valid ? kSuccess : kNegative;
		return o;
	}

	std::string name_;
	const Options &opt_;
	std::vector<std::string> args_;
	json machines_ = json::array();
	json diagnostics_ = json::array();
	std::string current_file_;
};

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
	Options opt;
	CLI::App app{"Timed and probabilistic automata: runs, traces, measures, translations and isomorphism checks",
	             "traceexpr"};
	app.require_subcommand(1);
	app.fallthrough();
	app.add_option("--depth", opt.depth, "Enumeration depth")->capture_default_str();
	app.add_option("--time-grid", opt.time_grid, "Sample timestamps on a grid: STEP or STEP:HORIZON");
	app.add_option("--weights", opt.weights, "Weighting file (left machine for iso)");
	app.add_option("--mode", opt.mode, "Probability mode of tapd machines")
	    ->check(CLI::IsMember({"direct", "normalized"}));
	app.add_option("--tol", opt.tol, "Quadrature tolerance (certificate tolerance for certify)");
	app.add_option("--budget", opt.budget, "Search node budget for iso")->capture_default_str();
	app.add_option("--format", opt.format, "Output format")
	    ->check(CLI::IsMember({"json", "pretty"}))
	    ->capture_default_str();

	auto file_arg = [&](CLI::App *sub) { sub->add_option("file", opt.files, "Machine file")->required(); };
	auto *validate = app.add_subcommand("validate", "Check a machine's structural rules");
	file_arg(validate);
	auto *runs = app.add_subcommand("runs", "Enumerate runs");
	file_arg(runs);
	runs->add_flag("--all-lengths", opt.all_lengths, "Include runs shorter than --depth");
	auto *traces = app.add_subcommand("traces", "Enumerate traces");
	file_arg(traces);
	traces->add_flag("--all-lengths", opt.all_lengths, "Include traces shorter than --depth");
	traces->add_flag("--untimed", opt.untimed, "Drop timestamps");
	auto *measure = app.add_subcommand("measure", "Measure a trace, an edge path or all traces of one length");
	file_arg(measure);
	auto *trace_opt = measure->add_option("--trace", opt.trace, "Comma-separated actions, optionally action@time");
	measure->add_option("--path", opt.path, "Comma-separated edge indices from the initial state")->excludes(trace_opt);
	auto *translate = app.add_subcommand("translate", "Translate a machine into another class");
	file_arg(translate);
	translate->add_option("--target", opt.target, "Target class keyword")->required();
	translate->add_option("--emit", opt.emit, "Write the translated machine to this file");
	auto *iso = app.add_subcommand("iso", "Bounded-depth trace expressiveness check between two machines");
	iso->add_option("files", opt.files, "Left and right machine files")->required()->expected(2);
	iso->add_option("--right-weights", opt.right_weights, "Weighting file for the right machine");
	iso->add_option("--time", opt.time_mode, "Timestamp comparison")
	    ->check(CLI::IsMember({"auto", "timed", "untimed"}))
	    ->capture_default_str();
	auto *certify = app.add_subcommand("certify", "Emit a strictness certificate");
	certify->add_option("certificate", opt.certificate, "pta-strictness or tapd-strictness")
	    ->required()
	    ->check(CLI::IsMember({"pta-strictness", "tapd-strictness"}));
	certify->add_option("--max-degree", opt.max_degree, "Largest Taylor degree")->capture_default_str();

	try {
		app.parse(argc, argv);
	} catch(const CLI::CallForHelp &e) {
		app.exit(e, out, err);
		return kSuccess;
	} catch(const CLI::CallForAllHelp &e) {
		app.exit(e, out, err);
		return kSuccess;
	} catch(const CLI::ParseError &e) {
		app.exit(e, out, err);
		return kUsage;
	}
	std::vector<std::string> args(argv + 1, argv + argc);
	const std::string name = app.get_subcommands().front()->get_name();
	return Command(name, opt, std::move(args)).execute(out, err);
}

} // namespace traceexpr::cli
