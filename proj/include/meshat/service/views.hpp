#pragma once

#include "meshat/codec.hpp"
#include "meshat/indicators.hpp"
#include "meshat/policy.hpp"
#include "meshat/state.hpp"

// JSON renderings of domain records for the HTTP API.
namespace meshat::service {

Json to_json(const Course& c);
Json to_json(const Actor& a);
Json to_json(const ProjectGroup& g);
Json to_json(const Task& t);
Json to_json(const Deliverable& d);
Json to_json(const BlogPost& p);
Json to_json(const Discussion& d);
Json to_json(const TaxonomySubject& s);
Json to_json(const LearningContract& c);
Json to_json(const GroupEvaluation& e);

Json to_json(const indicators::Ratio& r);
Json to_json(const indicators::ProjectDashboard& d);
Json to_json(const indicators::TeamworkIndicators& t);
Json to_json(const indicators::MetacognitiveProfile& m);
Json to_json(const indicators::LearningMonitoringView& v);

Json to_json(const policy::DecisionRow& row);

}  // namespace meshat::service
