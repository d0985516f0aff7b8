#pragma once

#include "seqent/entanglement.hpp"
#include "seqent/errors.hpp"
#include "seqent/family.hpp"
#include "seqent/linalg.hpp"
#include "seqent/optimizer.hpp"
#include "seqent/protocol.hpp"
#include "seqent/qstate.hpp"
#include "seqent/tolerances.hpp"
#include "seqent/unitary.hpp"
