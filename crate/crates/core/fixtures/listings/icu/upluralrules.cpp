U_CAPI int32_t U_EXPORT2
uplrules_selectFormatted(const UPluralRules *uplrules, const Formattable& fmt,
                         UChar *keyword, int32_t capacity, UErrorCode *status)
{
    const DecimalFormat *decFmt = dynamic_cast<const DecimalFormat *>(&fmt);
    if (decFmt == NULL) {
        *status = U_ILLEGAL_ARGUMENT_ERROR;
        return 0;
    }
    return 0;
}
