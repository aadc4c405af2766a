#ifndef MMSCHED_RATIONAL_HPP
#define MMSCHED_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace mms {

// All instants and durations are exact rationals. Schedules on uniform
// platforms produce event times like 2667/130, so there is no rounding
// anywhere in the core; decimal strings exist only for reporting.
using time_value = mpq_class;

// mpq_class(num, den) stores the pair verbatim; GMP arithmetic and equality
// assume canonical form, so every ratio built from parts must go through
// here.
inline time_value ratio(long num, long den)
{
	time_value value(num, den);
	value.canonicalize();
	return value;
}

// Parses "12", "-3", or "num/den". Throws on anything else (in particular
// decimal notation, which would silently lose exactness).
inline time_value parse_time(const std::string& text)
{
	if (text.empty())
		throw std::invalid_argument("empty rational literal");
	for (char ch : text)
		if (!(ch == '/' || ch == '-' || ch == '+' || (ch >= '0' && ch <= '9')))
			throw std::invalid_argument("bad rational literal: " + text);
	mpq_class value;
	if (value.set_str(text, 10) != 0)
		throw std::invalid_argument("bad rational literal: " + text);
	if (value.get_den() == 0)
		throw std::invalid_argument("zero denominator: " + text);
	value.canonicalize();
	return value;
}

// "num/den", or just "num" when the value is integral.
inline std::string to_ratio_string(const time_value& value)
{
	if (value.get_den() == 1)
		return value.get_num().get_str();
	return value.get_str();
}

// Fixed-point decimal with the requested number of places, rounding half
// away from zero. Exact values render exactly: 7/2 at 2 places is "3.50".
inline std::string to_decimal_string(const time_value& value, unsigned places)
{
	mpz_class num = value.get_num();
	const mpz_class& den = value.get_den();
	const bool negative = num < 0;
	if (negative)
		num = -num;
	mpz_class pow10 = 1;
	for (unsigned i = 0; i < places; i++)
		pow10 *= 10;
	mpz_class scaled_q, scaled_r;
	mpz_fdiv_qr(scaled_q.get_mpz_t(), scaled_r.get_mpz_t(),
	            mpz_class(num * pow10).get_mpz_t(), den.get_mpz_t());
	if (2 * scaled_r >= den)
		scaled_q += 1;
	mpz_class whole = scaled_q / pow10;
	mpz_class frac = scaled_q % pow10;
	std::string out = negative && scaled_q != 0 ? "-" : "";
	out += whole.get_str();
	if (places > 0) {
		std::string digits = frac.get_str();
		out += "." + std::string(places - digits.size(), '0') + digits;
	}
	return out;
}

} // namespace mms

#endif
