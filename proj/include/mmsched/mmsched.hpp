#ifndef MMSCHED_MMSCHED_HPP
#define MMSCHED_MMSCHED_HPP

#include "mmsched/bounds.hpp"
#include "mmsched/experiment.hpp"
#include "mmsched/io.hpp"
#include "mmsched/model.hpp"
#include "mmsched/oracle.hpp"
#include "mmsched/protocols.hpp"
#include "mmsched/rational.hpp"
#include "mmsched/simkernel.hpp"
#include "mmsched/validity.hpp"

#endif
