#pragma once

#include "kernelcat/errors.hpp"
#include "kernelcat/functor.hpp"
#include "kernelcat/hilbert.hpp"
#include "kernelcat/idempotent.hpp"
#include "kernelcat/io.hpp"
#include "kernelcat/kernel.hpp"
#include "kernelcat/martingale.hpp"
#include "kernelcat/numeric.hpp"
#include "kernelcat/partition.hpp"
#include "kernelcat/prob_space.hpp"
#include "kernelcat/random.hpp"
#include "kernelcat/random_var.hpp"
#include "kernelcat/topology.hpp"
