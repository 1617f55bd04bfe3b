#include "drham/commands.hpp"

#include <algorithm>

#include "drham/errors.hpp"
#include "drham/samples.hpp"

namespace drham {

const std::vector<std::string>& selectable_checks()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> all = check_names();
        all.push_back("lemma_s2");
        all.push_back("singular_subgroup");
        all.push_back("all");
        std::sort(all.begin(), all.end());
        return all;
    }();
    return names;
}

int cmd_check(const RunConfig& config, std::string& out)
{
    try {
        for (const auto& name : config.checks)
            if (std::find(selectable_checks().begin(), selectable_checks().end(), name) == selectable_checks().end())
                throw ParseError("unknown check '" + name + "'");
        CohFTDescriptor d = resolve_descriptor(config.cohft);
        std::set<std::string> descriptor_checks;
        for (const auto& name : config.checks)
            if (name != "lemma_s2" && name != "singular_subgroup") descriptor_checks.insert(name);

        std::vector<Verdict> verdicts;
        if (!descriptor_checks.empty()) {
            HierarchyBundle bundle = build_bundle(d, config.policy(), config.d_max);
            verdicts = run_checks(bundle, build_principal(bundle), descriptor_checks);
        }
        if (config.checks.contains("lemma_s2")) {
            auto suite = lemma_s2_suite(config.seed, kSuiteInstances);
            verdicts.insert(verdicts.end(), suite.begin(), suite.end());
        }
        if (config.checks.contains("singular_subgroup")) {
            auto suite = singular_subgroup_suite(config.seed, kSuiteInstances);
            verdicts.insert(verdicts.end(), suite.begin(), suite.end());
        }
        std::stable_sort(verdicts.begin(), verdicts.end(),
                         [](const Verdict& a, const Verdict& b) { return a.check < b.check; });
        out = render_check(config, d.name, verdicts);
        return all_ok(verdicts) ? kExitOk : kExitFailedChecks;
    } catch (const std::exception& e) {
        out = render_error(config, "check", e);
        return kExitError;
    }
}

int cmd_export(const RunConfig& config, const std::string& object, std::string& out)
{
    try {
        CohFTDescriptor d = resolve_descriptor(config.cohft);
        if (object == "descriptor") {
            out = to_json(d);
            return kExitOk;
        }
        HierarchyBundle bundle = build_bundle(d, config.policy(), config.d_max);
        out = render_export(config, bundle, object);
        return kExitOk;
    } catch (const std::exception& e) {
        out = render_error(config, "export", e);
        return kExitError;
    }
}

int cmd_describe(const RunConfig& config, std::string& out)
{
    try {
        out = render_describe(config, resolve_descriptor(config.cohft));
        return kExitOk;
    } catch (const std::exception& e) {
        out = render_error(config, "describe", e);
        return kExitError;
    }
}

} // namespace drham
