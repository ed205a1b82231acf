#include "cumstream/serialize.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cumstream {

namespace {

nlohmann::ordered_json tensor_json(const SymTensor& t) {
  nlohmann::ordered_json j;
  j["order"] = t.order();
  j["dim"] = t.dim();
  j["block_size"] = t.block_size();
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < t.block_count(); ++r) {
    const auto vals = t.block_data(r);
    blocks.push_back(std::vector<double>(vals.begin(), vals.end()));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

SymTensor tensor_from_json(const nlohmann::json& j) {
  const int order = j.at("order").get<int>();
  const int dim = j.at("dim").get<int>();
  const int block_size = j.at("block_size").get<int>();
  SymTensor t(order, dim, block_size);
  const auto& blocks = j.at("blocks");
  if (!blocks.is_array() || blocks.size() != t.block_count())
    throw std::runtime_error("tensor json: wrong number of blocks");
  for (std::size_t r = 0; r < t.block_count(); ++r) {
    const auto& src = blocks[r];
    auto dst = t.block_data(r);
    if (!src.is_array() || src.size() != dst.size())
      throw std::runtime_error("tensor json: wrong block volume");
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i].get<double>();
  }
  return t;
}

}  // namespace

std::string to_json(const SymTensor& t, int indent) {
  return tensor_json(t).dump(indent);
}

SymTensor sym_tensor_from_json(std::istream& in) {
  try {
    return tensor_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("tensor json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    // A shape field the tensor itself rejects is still bad input data.
    throw std::runtime_error(std::string("tensor json: ") + e.what());
  }
}

SymTensor sym_tensor_from_json(const std::string& text) {
  std::istringstream in(text);
  return sym_tensor_from_json(in);
}

std::string to_json(const CumulantSeries& c, std::uint64_t window, int indent) {
  nlohmann::ordered_json j;
  j["window"] = window;
  j["rows"] = c.window_len;
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for (const auto& t : c.tensors) tensors.push_back(tensor_json(t));
  j["tensors"] = std::move(tensors);
  return j.dump(indent);
}

}  // namespace cumstream
