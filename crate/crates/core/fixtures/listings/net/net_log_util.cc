#include "net/log/net_log_util.h"

namespace net {

std::unique_ptr<base::Value> GetNetConstants() {
  // Add information on the relationship between QUIC error codes
  // and their symbolic names.
  std::unique_ptr<base::DictionaryValue> dict(new base::DictionaryValue());

  for (QuicErrorCode error = QUIC_NO_ERROR;
        error < QUIC_LAST_ERROR;
        error = static_cast<QuicErrorCode>(error + 1)) {
    dict->SetInteger(QuicErrorCodeToString(error),
        static_cast<int>(error));
  }
  return dict;
}

}  // namespace net
