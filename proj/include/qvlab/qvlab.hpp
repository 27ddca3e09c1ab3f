#pragma once

#include "qvlab/assignment.hpp"
#include "qvlab/audit.hpp"
#include "qvlab/branch.hpp"
#include "qvlab/constructions.hpp"
#include "qvlab/disk2d.hpp"
#include "qvlab/error.hpp"
#include "qvlab/func1d.hpp"
#include "qvlab/io.hpp"
#include "qvlab/qspace.hpp"
#include "qvlab/regression.hpp"
