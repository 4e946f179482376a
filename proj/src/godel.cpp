#include "haltseries/godel.hpp"

#include "haltseries/errors.hpp"

#include <limits>
#include <string>

namespace hs {
namespace {

void append_gamma(std::string& bits, const Natural& value) {
  std::string binary = value.get_str(2);
  bits.append(binary.size() - 1, '0');
  bits += binary;
}

class BitReader {
 public:
  explicit BitReader(std::string bits) : bits_(std::move(bits)) {}

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_.size() - pos_; }

  Natural read_gamma(const char* what) {
    std::size_t start = pos_;
    std::size_t zeros = 0;
    while (pos_ < bits_.size() && bits_[pos_] == '0') {
      ++zeros;
      ++pos_;
    }
    if (pos_ + zeros + 1 > bits_.size())
      throw InvalidEncoding(start, std::string("truncated ") + what);
    Natural value(bits_.substr(pos_, zeros + 1), 2);
    pos_ += zeros + 1;
    return value;
  }

 private:
  std::string bits_;
  std::size_t pos_ = 0;
};

std::uint32_t narrow(const Natural& value, std::size_t position, const char* what) {
  if (value > std::numeric_limits<std::uint32_t>::max()) throw InvalidEncoding(position, std::string(what) + " out of range");
  return static_cast<std::uint32_t>(value.get_ui());
}

}  // namespace

Natural cantor_pair(const Natural& a, const Natural& b) {
  Natural s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<Natural, Natural> cantor_unpair(const Natural& z) {
  // w = floor((sqrt(8z + 1) - 1) / 2)
  Natural root;
  Natural disc = 8 * z + 1;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  Natural w = (root - 1) / 2;
  Natural t = w * (w + 1) / 2;
  Natural b = z - t;
  return {w - b, b};
}

Natural instruction_code(const Instruction& instruction) {
  if (const auto* inc = std::get_if<Inc>(&instruction)) return 2 * Natural(inc->reg) + 1;
  if (const auto* dec = std::get_if<DecJz>(&instruction))
    return 2 * cantor_pair(Natural(dec->reg), Natural(dec->target)) + 2;
  return 0;
}

Instruction instruction_from_code(const Natural& code) {
  if (code == 0) return Halt{};
  Natural q, r;
  Natural shifted = code - 1;
  mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), shifted.get_mpz_t(), 2);
  if (r == 0) return Inc{narrow(q, 0, "register index")};
  auto [reg, target] = cantor_unpair(q);
  return DecJz{narrow(reg, 0, "register index"), narrow(target, 0, "jump target")};
}

Natural encode_godel(const MachineProgram& program) {
  std::string bits = "1";
  append_gamma(bits, Natural(program.register_count()));
  append_gamma(bits, Natural(static_cast<unsigned long>(program.size())));
  for (const auto& ins : program.instructions()) append_gamma(bits, instruction_code(ins) + 1);
  return Natural(bits, 2);
}

MachineProgram decode_godel(const Natural& code) {
  if (sgn(code) <= 0) throw InvalidEncoding(0, "code must be positive");
  BitReader reader(code.get_str(2).substr(1));

  std::size_t at = reader.position();
  std::uint32_t registers = narrow(reader.read_gamma("register count"), at, "register count");
  at = reader.position();
  Natural length = reader.read_gamma("program length");
  // Every instruction occupies at least one bit.
  if (length > reader.remaining()) throw InvalidEncoding(at, "program length exceeds the remaining bits");

  std::vector<Instruction> instructions;
  for (unsigned long i = 0; i < length.get_ui(); ++i) {
    at = reader.position();
    Natural c = reader.read_gamma("instruction");
    try {
      instructions.push_back(instruction_from_code(c - 1));
    } catch (const InvalidEncoding& e) {
      throw InvalidEncoding(at, e.what());
    }
  }
  if (reader.remaining() != 0) throw InvalidEncoding(reader.position(), "trailing bits after the last instruction");

  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (const auto* inc = std::get_if<Inc>(&instructions[i]); inc && inc->reg >= registers)
      throw InvalidEncoding(i, "instruction " + std::to_string(i) + ": register index out of range");
    if (const auto* dec = std::get_if<DecJz>(&instructions[i])) {
      if (dec->reg >= registers)
        throw InvalidEncoding(i, "instruction " + std::to_string(i) + ": register index out of range");
      if (dec->target >= instructions.size())
        throw InvalidEncoding(i, "instruction " + std::to_string(i) + ": dangling jump target");
    }
  }
  return MachineProgram(std::move(instructions), registers);
}

}  // namespace hs
