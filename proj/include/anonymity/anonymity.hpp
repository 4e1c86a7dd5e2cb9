#pragma once

#include "anonymity/atoms.hpp"
#include "anonymity/countermodel.hpp"
#include "anonymity/csv.hpp"
#include "anonymity/entailment.hpp"
#include "anonymity/errors.hpp"
#include "anonymity/inference.hpp"
#include "anonymity/oracle.hpp"
#include "anonymity/report.hpp"
#include "anonymity/syntax.hpp"
#include "anonymity/team.hpp"
#include "anonymity/teamlogic.hpp"
