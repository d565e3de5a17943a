#pragma once

#include "toposprob/error.hpp"
#include "toposprob/rational.hpp"
#include "toposprob/linalg.hpp"
#include "toposprob/contextlab.hpp"
#include "toposprob/sheafcore.hpp"
#include "toposprob/spectral.hpp"
#include "toposprob/states.hpp"
#include "toposprob/measures.hpp"
#include "toposprob/interval.hpp"
#include "toposprob/producttopos.hpp"
#include "toposprob/truthobjects.hpp"
#include "toposprob/fixtures.hpp"
#include "toposprob/instance.hpp"
