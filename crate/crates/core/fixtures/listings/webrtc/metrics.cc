namespace webrtc {
namespace metrics {

Histogram* HistogramFactoryGetCounts(const std::string& name) {
  Histogram* histogram_pointer = CreateHistogram(name);
  webrtc::metrics::Histogram* prev_pointer =
    rtc::AtomicOps::CompareAndSwapPtr( &atomic_histogram_pointer,
    static_cast<webrtc::metrics::Histogram*> (nullptr),
    histogram_pointer);
  return prev_pointer ? prev_pointer : histogram_pointer;
}

}  // namespace metrics
}  // namespace webrtc
