namespace dawn_wire {

void RenderPipelineDescriptorSerialize(const Record& record, char** buffer, size_t memberLength) {
    auto memberBuffer = reinterpret_cast<DawnTextureFormat*> (*buffer);

    for (size_t i = 0; i < memberLength; ++i) {
        memberBuffer[i] = record.colorFormats[i];
    }
}

}  // namespace dawn_wire
