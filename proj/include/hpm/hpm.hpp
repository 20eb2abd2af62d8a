#pragma once

#include "hpm/b2mml.hpp"
#include "hpm/errors.hpp"
#include "hpm/genealogy.hpp"
#include "hpm/ids.hpp"
#include "hpm/mapping.hpp"
#include "hpm/model.hpp"
#include "hpm/model_io.hpp"
#include "hpm/schema.hpp"
#include "hpm/sync.hpp"
#include "hpm/time.hpp"
#include "hpm/ueml.hpp"
#include "hpm/validate.hpp"
#include "hpm/value.hpp"
#include "hpm/xml.hpp"
