// Copyright 2026 The Ogmios Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ogmios/document.hpp"
#include "ogmios/errors.hpp"
#include "ogmios/gazetteer.hpp"
#include "ogmios/io.hpp"
#include "ogmios/metrics.hpp"
#include "ogmios/morphology.hpp"
#include "ogmios/parser.hpp"
#include "ogmios/pipeline.hpp"
#include "ogmios/segmentation.hpp"
#include "ogmios/serialization.hpp"
#include "ogmios/terminology.hpp"
#include "ogmios/tokenizer.hpp"
#include "ogmios/unicode.hpp"
#include "ogmios/validate.hpp"
#include "ogmios/xml.hpp"
#include "ogmios/distribution/coordinator.hpp"
#include "ogmios/distribution/net.hpp"
#include "ogmios/distribution/protocol.hpp"
#include "ogmios/distribution/server.hpp"
#include "ogmios/distribution/worker.hpp"
