#include "traceexpr/machine.hpp"

#include "traceexpr/error.hpp"

#include <array>

namespace traceexpr {

namespace {

constexpr std::array<std::string_view, 6> kKeywords = {"nfa", "ta", "pa", "pta", "sta", "tapd"};

} // namespace

std::string_view class_keyword(MachineClass c) { return kKeywords[static_cast<std::size_t>(c)]; }

std::optional<MachineClass> class_from_keyword(std::string_view keyword) {
	for(std::size_t i = 0; i < kKeywords.size(); ++i) {
		if(kKeywords[i] == keyword) {
			return static_cast<MachineClass>(i);
		}
	}
	return std::nullopt;
}

bool is_timed(MachineClass c) { return c != MachineClass::Nfa && c != MachineClass::Pa; }
bool is_probabilistic(MachineClass c) { return c == MachineClass::Pa || c == MachineClass::Pta; }
bool is_delay_class(MachineClass c) { return c == MachineClass::Sta || c == MachineClass::Tapd; }

MachineClass machine_class(const Machine &m) { return static_cast<MachineClass>(m.index()); }

const MachineHeader &header(const Machine &m) {
	return std::visit([](const auto &x) -> const MachineHeader & { return x.header; }, m);
}

MachineHeader &header(Machine &m) {
	return std::visit([](auto &x) -> MachineHeader & { return x.header; }, m);
}

std::span<const std::string> clock_names(const Machine &m) {
	return std::visit(
	    [](const auto &x) -> std::span<const std::string> {
		    if constexpr(requires { x.clocks; }) {
			    return x.clocks;
		    } else {
			    return {};
		    }
	    },
	    m);
}

std::size_t edge_count(const Machine &m) {
	return std::visit([](const auto &x) { return x.edges.size(); }, m);
}

EdgeView edge_view(const Machine &m, EdgeRef e) {
	return std::visit(
	    [e](const auto &x) {
		    if(e >= x.edges.size()) {
			    throw InvalidArgument("edge index " + std::to_string(e) + " out of range");
		    }
		    const auto &edge = x.edges[e];
		    return EdgeView{edge.source, edge.target, edge.action};
	    },
	    m);
}

std::vector<std::vector<EdgeRef>> outgoing_edges(const Machine &m) {
	std::vector<std::vector<EdgeRef>> out(header(m).states.size());
	const std::size_t n = edge_count(m);
	for(EdgeRef e = 0; e < n; ++e) {
		const auto v = edge_view(m, e);
		if(v.source < out.size()) {
			out[v.source].push_back(e);
		}
	}
	return out;
}

std::optional<EdgeRef> find_delay_edge(std::span<const DelayEdge> edges, StateId i, StateId j) {
	for(EdgeRef e = 0; e < edges.size(); ++e) {
		if(edges[e].source == i && edges[e].target == j) {
			return e;
		}
	}
	return std::nullopt;
}

} // namespace traceexpr
