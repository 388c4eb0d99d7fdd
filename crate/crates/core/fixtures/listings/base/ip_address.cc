namespace net {

bool ParseV4(const base::StringPiece& host, IPAddressBytes& address) {
  size_t i = 0;
  uint32_t next_octet = 0;
  for (char c : host) {
    if (c == '.') {
      address.bytes_[i++] = static_cast<uint8_t>(next_octet);
      next_octet = 0;
      continue;
    }
    next_octet = next_octet * 10 + (c - '0');
  }
  return i == 4;
}

}  // namespace net
