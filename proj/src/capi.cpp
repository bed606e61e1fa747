#include "qhom.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "io.hpp"
#include "jobs.hpp"

using qhom::ChainComplex;
using qhom::Error;

struct qhom_session {
    std::string last_error;
};

struct qhom_complex {
    ChainComplex value;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qhom_status set_error(qhom_session* s, qhom_status code, const std::string& message) {
    if (s) s->last_error = message;
    return code;
}

template <typename Fn>
qhom_status guarded(qhom_session* s, Fn&& fn) {
    if (!s) return QHOM_ERR_ARGUMENT;
    s->last_error.clear();
    try {
        return fn();
    } catch (const Error& e) {
        return set_error(s, e.kind == Error::Kind::Parse ? QHOM_ERR_PARSE : QHOM_ERR_DOMAIN,
                         e.message);
    } catch (const std::bad_alloc&) {
        return set_error(s, QHOM_ERR_PARSE, "out of memory");
    } catch (const std::exception& e) {
        return set_error(s, QHOM_ERR_PARSE, e.what());
    }
}

}  // namespace

extern "C" {

qhom_session* qhom_session_new(void) {
    return new (std::nothrow) qhom_session;
}

void qhom_session_free(qhom_session* s) {
    delete s;
}

const char* qhom_last_error(const qhom_session* s) {
    return s ? s->last_error.c_str() : "";
}

qhom_status qhom_run_job(qhom_session* s, const char* command, const char* args_json,
                         char** report_out) {
    if (!command || !report_out) return set_error(s, QHOM_ERR_ARGUMENT, "null argument");
    *report_out = nullptr;
    return guarded(s, [&]() -> qhom_status {
        nlohmann::json args =
            args_json ? qhom::io::parse_json(args_json) : nlohmann::json::object();
        if (!args.is_object()) qhom::fail_parse("job arguments must be a JSON object");
        qhom::jobs::JobResult r = qhom::jobs::run_job(command, args);
        *report_out = dup_string(r.report.dump(2) + "\n");
        if (r.exit_code == 0) return QHOM_OK;
        std::string msg = r.report.value("error", std::string("command failed"));
        return set_error(s, r.exit_code == 2 ? QHOM_ERR_PARSE : QHOM_ERR_DOMAIN, msg);
    });
}

qhom_status qhom_complex_parse(qhom_session* s, const char* complex_json, qhom_complex** out) {
    if (!complex_json || !out) return set_error(s, QHOM_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded(s, [&]() -> qhom_status {
        ChainComplex c = qhom::io::complex_from_json(qhom::io::parse_json(complex_json));
        *out = new qhom_complex{std::move(c)};
        return QHOM_OK;
    });
}

void qhom_complex_free(qhom_complex* c) {
    delete c;
}

qhom_status qhom_complex_homology(qhom_session* s, const qhom_complex* c, char** report_out) {
    if (!c || !report_out) return set_error(s, QHOM_ERR_ARGUMENT, "null argument");
    *report_out = nullptr;
    return guarded(s, [&]() -> qhom_status {
        qhom::ComplexReport rep = qhom::verify_complex(c->value);
        if (!rep.ok) qhom::fail_domain(rep.message);
        nlohmann::json j = qhom::io::homology_to_json(qhom::homology(c->value));
        j["euler"] = qhom::euler_characteristic(c->value);
        *report_out = dup_string(j.dump(2) + "\n");
        return QHOM_OK;
    });
}

qhom_status qhom_complex_euler(qhom_session* s, const qhom_complex* c, long long* chi_out) {
    if (!c || !chi_out) return set_error(s, QHOM_ERR_ARGUMENT, "null argument");
    return guarded(s, [&]() -> qhom_status {
        *chi_out = qhom::euler_characteristic(c->value);
        return QHOM_OK;
    });
}

qhom_status qhom_complex_verify(qhom_session* s, const qhom_complex* c, char** report_out) {
    if (!c || !report_out) return set_error(s, QHOM_ERR_ARGUMENT, "null argument");
    *report_out = nullptr;
    return guarded(s, [&]() -> qhom_status {
        qhom::ComplexReport rep = qhom::verify_complex(c->value);
        nlohmann::json j;
        j["ok"] = rep.ok;
        if (!rep.ok) {
            j["degree"] = rep.degree;
            j["detail"] = rep.message;
        }
        *report_out = dup_string(j.dump(2) + "\n");
        if (!rep.ok) return set_error(s, QHOM_ERR_DOMAIN, rep.message);
        return QHOM_OK;
    });
}

void qhom_string_free(char* s) {
    std::free(s);
}

const char* qhom_version(void) {
    return "0.1.0";
}

}  // extern "C"
