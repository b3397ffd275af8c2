#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "salmon/tensor.hpp"

namespace salmon {

/// {"dims":[m,n,l],"mode":"rational"|"gfp"|"float","modulus":p?,"entries":[...]}.
/// Rational entries are strings "a/b" or "a"; gfp entries are integers in [0,p);
/// float entries are JSON numbers written with round-trip precision.
std::string tensor_to_json(const Tensor3& t);
/// Inverse of tensor_to_json. Rational strings are canonicalized ("3/6" -> 1/2).
/// Integer-valued gfp entries outside [0,p) are reduced.
Tensor3 tensor_from_json(std::string_view text);

Tensor3 read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const std::filesystem::path& path, const Tensor3& t);

/// Reads a whole file into memory; throws ParseError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace salmon
