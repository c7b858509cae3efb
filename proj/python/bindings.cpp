#include <aasim/entrypoint/entrypoint.hpp>
#include <aasim/harness/demo.hpp>
#include <aasim/harness/suite.hpp>

#include <pybind11/pybind11.h>

namespace py = pybind11;

namespace
{
// Reports cross the boundary as JSON text; the Python side decodes them.
std::string suite_json(const std::string& dir, uint64_t seed)
{
    return aasim::suite_to_json(aasim::run_table2_suite(dir, seed)).dump();
}

std::string scenario_json(const std::string& path, const std::string& mode, uint64_t seed)
{
    const auto s = aasim::load_scenario(path);
    return aasim::result_to_json(aasim::run_scenario_detailed(s, seed, aasim::parse_mode_selection(mode))).dump();
}

std::string prefund(uint64_t call_gas, uint64_t verification_gas, uint64_t pre_verification_gas,
    const std::string& max_fee)
{
    aasim::UserOperation op;
    op.call_gas_limit = call_gas;
    op.verification_gas_limit = verification_gas;
    op.pre_verification_gas = pre_verification_gas;
    op.max_fee_per_gas = aasim::parse_u256(max_fee);
    return aasim::to_dec(aasim::EntryPoint::prefund(op));
}
}  // namespace

PYBIND11_MODULE(_core, m)
{
    static py::exception<aasim::Error> error(m, "AasimError");
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const aasim::Error& e)
        {
            py::object exc = py::handle{error.ptr()}(e.what());
            exc.attr("code") = std::string{aasim::to_string(e.code())};
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def("suite_json", &suite_json, py::arg("directory"), py::arg("seed"));
    m.def("scenario_json", &scenario_json, py::arg("path"), py::arg("mode"), py::arg("seed"));
    m.def("demo_json", [] { return aasim::demo_to_json(aasim::run_usdc_demo()).dump(); });
    m.def("prefund_dec", &prefund, py::arg("call_gas"), py::arg("verification_gas"),
        py::arg("pre_verification_gas"), py::arg("max_fee"));
}
