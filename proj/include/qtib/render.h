/*
 * Copyright 2026 The qtib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QTIB_RENDER_H_
#define QTIB_RENDER_H_

#include <string>

#include "qtib/info_measures.h"
#include "qtib/quadtree.h"

namespace qtib {

// Binary PPM (P6) of side 2^L * scale. Each leaf block is filled on a
// white -> red ramp by p(y = occupied | t) (outcome index 1), zero-mass
// leaves are mid-gray, and every block gets a 1-pixel black outline.
// Throws DomainError for scale < 1 or a tree/stats depth mismatch.
std::string RenderAbstraction(const TreeAbstraction& tree,
                              const NodeStatsTable& stats, int scale);

}  // namespace qtib

#endif  // QTIB_RENDER_H_
