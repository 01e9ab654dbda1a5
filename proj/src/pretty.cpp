// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include "lysa/dsl.hpp"

namespace lysa {

namespace {

void print_term(const Term& t, std::string& out);

void print_terms(const std::vector<Term>& ts, std::string& out) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        print_term(ts[i], out);
    }
}

void print_vars(const std::vector<Variable>& vs, std::string& out) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += vs[i].str();
    }
}

void print_term(const Term& t, std::string& out) {
    std::visit(overloaded{
                   [&](const Name& n) { out += n.str(); },
                   [&](const Variable& v) { out += v.str(); },
                   [&](const Encryption& e) {
                       out += "{";
                       print_terms(e.payload, out);
                       out += "}:";
                       const bool nested = std::holds_alternative<Encryption>(e.key->node);
                       if (nested) {
                           out += "(";
                       }
                       print_term(*e.key, out);
                       if (nested) {
                           out += ")";
                       }
                       out += " [at " + e.at.str() + " dest " + e.dest.str() + "]";
                   },
               },
               t.node);
}

void print_process(const ProcessPtr& p, std::string& out, bool top);

void print_prefix(const ProcessPtr& p, std::string& out) {
    if (std::holds_alternative<Parallel>(p->node)) {
        out += "(";
        print_process(p, out, false);
        out += ")";
    } else {
        print_process(p, out, false);
    }
}

void print_process(const ProcessPtr& p, std::string& out, bool top) {
    std::visit(overloaded{
                   [&](const Nil&) { out += "0"; },
                   [&](const Parallel& n) {
                       print_prefix(n.left, out);
                       out += top ? "\n| " : " | ";
                       print_process(n.right, out, top);
                   },
                   [&](const Replication& n) {
                       out += "!";
                       print_prefix(n.body, out);
                   },
                   [&](const Restriction& n) {
                       out += "new(" + n.name.str() + ") ";
                       print_prefix(n.body, out);
                   },
                   [&](const Output& n) {
                       out += "<";
                       print_terms(n.terms, out);
                       out += ">.";
                       print_prefix(n.cont, out);
                   },
                   [&](const Input& n) {
                       out += "(";
                       print_terms(n.match, out);
                       out += "; ";
                       print_vars(n.bind, out);
                       out += ").";
                       print_prefix(n.cont, out);
                   },
                   [&](const Decryption& n) {
                       out += "decrypt ";
                       print_term(n.subject, out);
                       out += " as {";
                       print_terms(n.match, out);
                       out += "; ";
                       print_vars(n.bind, out);
                       out += "}:";
                       print_term(n.key, out);
                       out += " [at " + n.at.str() + " orig " + n.orig.str() + "] in ";
                       print_prefix(n.cont, out);
                   },
               },
               p->node);
}

} // namespace

std::string pretty(const ProcessPtr& p) {
    std::string out;
    print_process(p, out, true);
    return out;
}

std::string pretty(const Term& t) {
    std::string out;
    print_term(t, out);
    return out;
}

} // namespace lysa
