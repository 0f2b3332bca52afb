#pragma once

#include "qdw/channels.hpp"
#include "qdw/errors.hpp"
#include "qdw/linalg.hpp"
#include "qdw/protocol.hpp"
#include "qdw/random.hpp"
#include "qdw/states.hpp"
#include "qdw/tomography.hpp"
#include "qdw/witness.hpp"
