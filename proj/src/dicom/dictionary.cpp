/**
 * @file dictionary.cpp
 * @brief Bundled tag dictionary (patient, study, series, equipment, image,
 *        SEG and RT Structure Set modules)
 */

#include "curator/dicom/dictionary.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace curator::dicom {

namespace {

constexpr std::array kEntries = std::to_array<DictionaryEntry>({
    {{0x0002, 0x0000}, "UL", "FileMetaInformationGroupLength"},
    {{0x0002, 0x0001}, "OB", "FileMetaInformationVersion"},
    {{0x0002, 0x0002}, "UI", "MediaStorageSOPClassUID"},
    {{0x0002, 0x0003}, "UI", "MediaStorageSOPInstanceUID"},
    {{0x0002, 0x0010}, "UI", "TransferSyntaxUID"},
    {{0x0002, 0x0012}, "UI", "ImplementationClassUID"},
    {{0x0002, 0x0013}, "SH", "ImplementationVersionName"},
    {{0x0002, 0x0016}, "AE", "SourceApplicationEntityTitle"},
    {{0x0008, 0x0005}, "CS", "SpecificCharacterSet"},
    {{0x0008, 0x0008}, "CS", "ImageType"},
    {{0x0008, 0x0012}, "DA", "InstanceCreationDate"},
    {{0x0008, 0x0013}, "TM", "InstanceCreationTime"},
    {{0x0008, 0x0014}, "UI", "InstanceCreatorUID"},
    {{0x0008, 0x0016}, "UI", "SOPClassUID"},
    {{0x0008, 0x0018}, "UI", "SOPInstanceUID"},
    {{0x0008, 0x0020}, "DA", "StudyDate"},
    {{0x0008, 0x0021}, "DA", "SeriesDate"},
    {{0x0008, 0x0022}, "DA", "AcquisitionDate"},
    {{0x0008, 0x0023}, "DA", "ContentDate"},
    {{0x0008, 0x002A}, "DT", "AcquisitionDateTime"},
    {{0x0008, 0x0030}, "TM", "StudyTime"},
    {{0x0008, 0x0031}, "TM", "SeriesTime"},
    {{0x0008, 0x0032}, "TM", "AcquisitionTime"},
    {{0x0008, 0x0033}, "TM", "ContentTime"},
    {{0x0008, 0x0050}, "SH", "AccessionNumber"},
    {{0x0008, 0x0060}, "CS", "Modality"},
    {{0x0008, 0x0064}, "CS", "ConversionType"},
    {{0x0008, 0x0068}, "CS", "PresentationIntentType"},
    {{0x0008, 0x0070}, "LO", "Manufacturer"},
    {{0x0008, 0x0080}, "LO", "InstitutionName"},
    {{0x0008, 0x0081}, "ST", "InstitutionAddress"},
    {{0x0008, 0x0090}, "PN", "ReferringPhysicianName"},
    {{0x0008, 0x0100}, "SH", "CodeValue"},
    {{0x0008, 0x0102}, "SH", "CodingSchemeDesignator"},
    {{0x0008, 0x0103}, "SH", "CodingSchemeVersion"},
    {{0x0008, 0x0104}, "LO", "CodeMeaning"},
    {{0x0008, 0x0105}, "CS", "MappingResource"},
    {{0x0008, 0x0201}, "SH", "TimezoneOffsetFromUTC"},
    {{0x0008, 0x1010}, "SH", "StationName"},
    {{0x0008, 0x1030}, "LO", "StudyDescription"},
    {{0x0008, 0x1032}, "SQ", "ProcedureCodeSequence"},
    {{0x0008, 0x103E}, "LO", "SeriesDescription"},
    {{0x0008, 0x1040}, "LO", "InstitutionalDepartmentName"},
    {{0x0008, 0x1048}, "PN", "PhysiciansOfRecord"},
    {{0x0008, 0x1050}, "PN", "PerformingPhysicianName"},
    {{0x0008, 0x1060}, "PN", "NameOfPhysiciansReadingStudy"},
    {{0x0008, 0x1070}, "PN", "OperatorsName"},
    {{0x0008, 0x1080}, "LO", "AdmittingDiagnosesDescription"},
    {{0x0008, 0x1090}, "LO", "ManufacturerModelName"},
    {{0x0008, 0x1110}, "SQ", "ReferencedStudySequence"},
    {{0x0008, 0x1111}, "SQ", "ReferencedPerformedProcedureStepSequence"},
    {{0x0008, 0x1115}, "SQ", "ReferencedSeriesSequence"},
    {{0x0008, 0x1140}, "SQ", "ReferencedImageSequence"},
    {{0x0008, 0x114A}, "SQ", "ReferencedInstanceSequence"},
    {{0x0008, 0x1150}, "UI", "ReferencedSOPClassUID"},
    {{0x0008, 0x1155}, "UI", "ReferencedSOPInstanceUID"},
    {{0x0008, 0x1160}, "IS", "ReferencedFrameNumber"},
    {{0x0008, 0x2111}, "ST", "DerivationDescription"},
    {{0x0008, 0x2112}, "SQ", "SourceImageSequence"},
    {{0x0008, 0x9123}, "UI", "CreatorVersionUID"},
    {{0x0008, 0x9124}, "SQ", "DerivationImageSequence"},
    {{0x0008, 0x9205}, "CS", "PixelPresentation"},
    {{0x0008, 0x9206}, "CS", "VolumetricProperties"},
    {{0x0008, 0x9207}, "CS", "VolumeBasedCalculationTechnique"},
    {{0x0008, 0x9215}, "SQ", "DerivationCodeSequence"},
    {{0x0010, 0x0010}, "PN", "PatientName"},
    {{0x0010, 0x0020}, "LO", "PatientID"},
    {{0x0010, 0x0021}, "LO", "IssuerOfPatientID"},
    {{0x0010, 0x0030}, "DA", "PatientBirthDate"},
    {{0x0010, 0x0032}, "TM", "PatientBirthTime"},
    {{0x0010, 0x0040}, "CS", "PatientSex"},
    {{0x0010, 0x1000}, "LO", "OtherPatientIDs"},
    {{0x0010, 0x1001}, "PN", "OtherPatientNames"},
    {{0x0010, 0x1010}, "AS", "PatientAge"},
    {{0x0010, 0x1020}, "DS", "PatientSize"},
    {{0x0010, 0x1030}, "DS", "PatientWeight"},
    {{0x0010, 0x1040}, "LO", "PatientAddress"},
    {{0x0010, 0x2154}, "SH", "PatientTelephoneNumbers"},
    {{0x0010, 0x2160}, "SH", "EthnicGroup"},
    {{0x0010, 0x2180}, "SH", "Occupation"},
    {{0x0010, 0x21B0}, "LT", "AdditionalPatientHistory"},
    {{0x0010, 0x21C0}, "US", "PregnancyStatus"},
    {{0x0010, 0x4000}, "LT", "PatientComments"},
    {{0x0012, 0x0010}, "LO", "ClinicalTrialSponsorName"},
    {{0x0012, 0x0020}, "LO", "ClinicalTrialProtocolID"},
    {{0x0012, 0x0040}, "LO", "ClinicalTrialSubjectID"},
    {{0x0012, 0x0050}, "LO", "ClinicalTrialTimePointID"},
    {{0x0012, 0x0062}, "CS", "PatientIdentityRemoved"},
    {{0x0012, 0x0063}, "LO", "DeidentificationMethod"},
    {{0x0018, 0x0010}, "LO", "ContrastBolusAgent"},
    {{0x0018, 0x0015}, "CS", "BodyPartExamined"},
    {{0x0018, 0x0020}, "CS", "ScanningSequence"},
    {{0x0018, 0x0021}, "CS", "SequenceVariant"},
    {{0x0018, 0x0022}, "CS", "ScanOptions"},
    {{0x0018, 0x0023}, "CS", "MRAcquisitionType"},
    {{0x0018, 0x0024}, "SH", "SequenceName"},
    {{0x0018, 0x0050}, "DS", "SliceThickness"},
    {{0x0018, 0x0060}, "DS", "KVP"},
    {{0x0018, 0x0080}, "DS", "RepetitionTime"},
    {{0x0018, 0x0081}, "DS", "EchoTime"},
    {{0x0018, 0x0082}, "DS", "InversionTime"},
    {{0x0018, 0x0083}, "DS", "NumberOfAverages"},
    {{0x0018, 0x0084}, "DS", "ImagingFrequency"},
    {{0x0018, 0x0085}, "SH", "ImagedNucleus"},
    {{0x0018, 0x0086}, "IS", "EchoNumbers"},
    {{0x0018, 0x0087}, "DS", "MagneticFieldStrength"},
    {{0x0018, 0x0088}, "DS", "SpacingBetweenSlices"},
    {{0x0018, 0x0090}, "DS", "DataCollectionDiameter"},
    {{0x0018, 0x0091}, "IS", "EchoTrainLength"},
    {{0x0018, 0x0095}, "DS", "PixelBandwidth"},
    {{0x0018, 0x1000}, "LO", "DeviceSerialNumber"},
    {{0x0018, 0x1012}, "DA", "DateOfSecondaryCapture"},
    {{0x0018, 0x1016}, "LO", "SecondaryCaptureDeviceManufacturer"},
    {{0x0018, 0x1018}, "LO", "SecondaryCaptureDeviceManufacturerModelName"},
    {{0x0018, 0x1020}, "LO", "SoftwareVersions"},
    {{0x0018, 0x1030}, "LO", "ProtocolName"},
    {{0x0018, 0x1088}, "IS", "HeartRate"},
    {{0x0018, 0x1100}, "DS", "ReconstructionDiameter"},
    {{0x0018, 0x1110}, "DS", "DistanceSourceToDetector"},
    {{0x0018, 0x1111}, "DS", "DistanceSourceToPatient"},
    {{0x0018, 0x1120}, "DS", "GantryDetectorTilt"},
    {{0x0018, 0x1130}, "DS", "TableHeight"},
    {{0x0018, 0x1140}, "CS", "RotationDirection"},
    {{0x0018, 0x1150}, "IS", "ExposureTime"},
    {{0x0018, 0x1151}, "IS", "XRayTubeCurrent"},
    {{0x0018, 0x1152}, "IS", "Exposure"},
    {{0x0018, 0x1160}, "SH", "FilterType"},
    {{0x0018, 0x1164}, "DS", "ImagerPixelSpacing"},
    {{0x0018, 0x1170}, "IS", "GeneratorPower"},
    {{0x0018, 0x1190}, "DS", "FocalSpots"},
    {{0x0018, 0x1210}, "SH", "ConvolutionKernel"},
    {{0x0018, 0x1250}, "SH", "ReceiveCoilName"},
    {{0x0018, 0x1251}, "SH", "TransmitCoilName"},
    {{0x0018, 0x1310}, "US", "AcquisitionMatrix"},
    {{0x0018, 0x1312}, "CS", "InPlanePhaseEncodingDirection"},
    {{0x0018, 0x1314}, "DS", "FlipAngle"},
    {{0x0018, 0x1316}, "DS", "SAR"},
    {{0x0018, 0x5100}, "CS", "PatientPosition"},
    {{0x0018, 0x5101}, "CS", "ViewPosition"},
    {{0x0018, 0x9004}, "CS", "ContentQualification"},
    {{0x0018, 0x9073}, "FD", "AcquisitionDuration"},
    {{0x0018, 0x9306}, "FD", "SingleCollimationWidth"},
    {{0x0018, 0x9307}, "FD", "TotalCollimationWidth"},
    {{0x0018, 0x9310}, "FD", "TableFeedPerRotation"},
    {{0x0018, 0x9311}, "FD", "SpiralPitchFactor"},
    {{0x0018, 0x9345}, "FD", "CTDIvol"},
    {{0x0020, 0x000D}, "UI", "StudyInstanceUID"},
    {{0x0020, 0x000E}, "UI", "SeriesInstanceUID"},
    {{0x0020, 0x0010}, "SH", "StudyID"},
    {{0x0020, 0x0011}, "IS", "SeriesNumber"},
    {{0x0020, 0x0012}, "IS", "AcquisitionNumber"},
    {{0x0020, 0x0013}, "IS", "InstanceNumber"},
    {{0x0020, 0x0020}, "CS", "PatientOrientation"},
    {{0x0020, 0x0032}, "DS", "ImagePositionPatient"},
    {{0x0020, 0x0037}, "DS", "ImageOrientationPatient"},
    {{0x0020, 0x0052}, "UI", "FrameOfReferenceUID"},
    {{0x0020, 0x0060}, "CS", "Laterality"},
    {{0x0020, 0x0062}, "CS", "ImageLaterality"},
    {{0x0020, 0x0100}, "IS", "TemporalPositionIdentifier"},
    {{0x0020, 0x0105}, "IS", "NumberOfTemporalPositions"},
    {{0x0020, 0x0200}, "UI", "SynchronizationFrameOfReferenceUID"},
    {{0x0020, 0x1002}, "IS", "ImagesInAcquisition"},
    {{0x0020, 0x1040}, "LO", "PositionReferenceIndicator"},
    {{0x0020, 0x1041}, "DS", "SliceLocation"},
    {{0x0020, 0x4000}, "LT", "ImageComments"},
    {{0x0020, 0x9056}, "SH", "StackID"},
    {{0x0020, 0x9057}, "UL", "InStackPositionNumber"},
    {{0x0020, 0x9111}, "SQ", "FrameContentSequence"},
    {{0x0020, 0x9113}, "SQ", "PlanePositionSequence"},
    {{0x0020, 0x9116}, "SQ", "PlaneOrientationSequence"},
    {{0x0020, 0x9157}, "UL", "DimensionIndexValues"},
    {{0x0020, 0x9164}, "UI", "DimensionOrganizationUID"},
    {{0x0020, 0x9165}, "AT", "DimensionIndexPointer"},
    {{0x0020, 0x9167}, "AT", "FunctionalGroupPointer"},
    {{0x0020, 0x9221}, "SQ", "DimensionOrganizationSequence"},
    {{0x0020, 0x9222}, "SQ", "DimensionIndexSequence"},
    {{0x0020, 0x9421}, "LO", "DimensionDescriptionLabel"},
    {{0x0028, 0x0002}, "US", "SamplesPerPixel"},
    {{0x0028, 0x0004}, "CS", "PhotometricInterpretation"},
    {{0x0028, 0x0006}, "US", "PlanarConfiguration"},
    {{0x0028, 0x0008}, "IS", "NumberOfFrames"},
    {{0x0028, 0x0009}, "AT", "FrameIncrementPointer"},
    {{0x0028, 0x0010}, "US", "Rows"},
    {{0x0028, 0x0011}, "US", "Columns"},
    {{0x0028, 0x0030}, "DS", "PixelSpacing"},
    {{0x0028, 0x0034}, "IS", "PixelAspectRatio"},
    {{0x0028, 0x0051}, "CS", "CorrectedImage"},
    {{0x0028, 0x0100}, "US", "BitsAllocated"},
    {{0x0028, 0x0101}, "US", "BitsStored"},
    {{0x0028, 0x0102}, "US", "HighBit"},
    {{0x0028, 0x0103}, "US", "PixelRepresentation"},
    {{0x0028, 0x0106}, "US", "SmallestImagePixelValue"},
    {{0x0028, 0x0107}, "US", "LargestImagePixelValue"},
    {{0x0028, 0x0120}, "US", "PixelPaddingValue"},
    {{0x0028, 0x0301}, "CS", "BurnedInAnnotation"},
    {{0x0028, 0x0A02}, "CS", "PixelSpacingCalibrationType"},
    {{0x0028, 0x1040}, "CS", "PixelIntensityRelationship"},
    {{0x0028, 0x1041}, "SS", "PixelIntensityRelationshipSign"},
    {{0x0028, 0x1050}, "DS", "WindowCenter"},
    {{0x0028, 0x1051}, "DS", "WindowWidth"},
    {{0x0028, 0x1052}, "DS", "RescaleIntercept"},
    {{0x0028, 0x1053}, "DS", "RescaleSlope"},
    {{0x0028, 0x1054}, "LO", "RescaleType"},
    {{0x0028, 0x1055}, "LO", "WindowCenterWidthExplanation"},
    {{0x0028, 0x1056}, "CS", "VOILUTFunction"},
    {{0x0028, 0x2110}, "CS", "LossyImageCompression"},
    {{0x0028, 0x2112}, "DS", "LossyImageCompressionRatio"},
    {{0x0028, 0x2114}, "CS", "LossyImageCompressionMethod"},
    {{0x0028, 0x3002}, "US", "LUTDescriptor"},
    {{0x0028, 0x3003}, "LO", "LUTExplanation"},
    {{0x0028, 0x3006}, "US", "LUTData"},
    {{0x0028, 0x3010}, "SQ", "VOILUTSequence"},
    {{0x0028, 0x9110}, "SQ", "PixelMeasuresSequence"},
    {{0x0028, 0x9132}, "SQ", "FrameVOILUTSequence"},
    {{0x0028, 0x9145}, "SQ", "PixelValueTransformationSequence"},
    {{0x0032, 0x1032}, "PN", "RequestingPhysician"},
    {{0x0032, 0x1033}, "LO", "RequestingService"},
    {{0x0032, 0x1060}, "LO", "RequestedProcedureDescription"},
    {{0x0032, 0x4000}, "LT", "StudyComments"},
    {{0x0040, 0x0007}, "LO", "ScheduledProcedureStepDescription"},
    {{0x0040, 0x0009}, "SH", "ScheduledProcedureStepID"},
    {{0x0040, 0x0244}, "DA", "PerformedProcedureStepStartDate"},
    {{0x0040, 0x0245}, "TM", "PerformedProcedureStepStartTime"},
    {{0x0040, 0x0253}, "SH", "PerformedProcedureStepID"},
    {{0x0040, 0x0254}, "LO", "PerformedProcedureStepDescription"},
    {{0x0040, 0x0260}, "SQ", "PerformedProtocolCodeSequence"},
    {{0x0040, 0x0275}, "SQ", "RequestAttributesSequence"},
    {{0x0040, 0x1001}, "SH", "RequestedProcedureID"},
    {{0x0040, 0xA010}, "CS", "RelationshipType"},
    {{0x0040, 0xA040}, "CS", "ValueType"},
    {{0x0040, 0xA043}, "SQ", "ConceptNameCodeSequence"},
    {{0x0040, 0xA124}, "UI", "UID"},
    {{0x0040, 0xA160}, "UT", "TextValue"},
    {{0x0040, 0xA168}, "SQ", "ConceptCodeSequence"},
    {{0x0040, 0xA491}, "CS", "CompletionFlag"},
    {{0x0040, 0xA493}, "CS", "VerificationFlag"},
    {{0x0040, 0xA504}, "SQ", "ContentTemplateSequence"},
    {{0x0040, 0xA730}, "SQ", "ContentSequence"},
    {{0x0054, 0x0016}, "SQ", "RadiopharmaceuticalInformationSequence"},
    {{0x0054, 0x1000}, "CS", "SeriesType"},
    {{0x0054, 0x1001}, "CS", "Units"},
    {{0x0054, 0x1002}, "CS", "CountsSource"},
    {{0x0054, 0x1101}, "LO", "AttenuationCorrectionMethod"},
    {{0x0054, 0x1102}, "CS", "DecayCorrection"},
    {{0x0054, 0x1103}, "LO", "ReconstructionMethod"},
    {{0x0054, 0x1300}, "DS", "FrameReferenceTime"},
    {{0x0054, 0x1321}, "DS", "DecayFactor"},
    {{0x0062, 0x0001}, "CS", "SegmentationType"},
    {{0x0062, 0x0002}, "SQ", "SegmentSequence"},
    {{0x0062, 0x0003}, "SQ", "SegmentedPropertyCategoryCodeSequence"},
    {{0x0062, 0x0004}, "US", "SegmentNumber"},
    {{0x0062, 0x0005}, "LO", "SegmentLabel"},
    {{0x0062, 0x0006}, "ST", "SegmentDescription"},
    {{0x0062, 0x0008}, "CS", "SegmentAlgorithmType"},
    {{0x0062, 0x0009}, "LO", "SegmentAlgorithmName"},
    {{0x0062, 0x000A}, "SQ", "SegmentIdentificationSequence"},
    {{0x0062, 0x000B}, "US", "ReferencedSegmentNumber"},
    {{0x0062, 0x000C}, "US", "RecommendedDisplayGrayscaleValue"},
    {{0x0062, 0x000D}, "US", "RecommendedDisplayCIELabValue"},
    {{0x0062, 0x000E}, "US", "MaximumFractionalValue"},
    {{0x0062, 0x000F}, "SQ", "SegmentedPropertyTypeCodeSequence"},
    {{0x0062, 0x0010}, "CS", "SegmentationFractionalType"},
    {{0x0070, 0x0080}, "CS", "ContentLabel"},
    {{0x0070, 0x0081}, "LO", "ContentDescription"},
    {{0x0070, 0x0084}, "PN", "ContentCreatorName"},
    {{0x0088, 0x0140}, "UI", "StorageMediaFileSetUID"},
    {{0x3006, 0x0002}, "SH", "StructureSetLabel"},
    {{0x3006, 0x0004}, "LO", "StructureSetName"},
    {{0x3006, 0x0006}, "ST", "StructureSetDescription"},
    {{0x3006, 0x0008}, "DA", "StructureSetDate"},
    {{0x3006, 0x0009}, "TM", "StructureSetTime"},
    {{0x3006, 0x0010}, "SQ", "ReferencedFrameOfReferenceSequence"},
    {{0x3006, 0x0012}, "SQ", "RTReferencedStudySequence"},
    {{0x3006, 0x0014}, "SQ", "RTReferencedSeriesSequence"},
    {{0x3006, 0x0016}, "SQ", "ContourImageSequence"},
    {{0x3006, 0x0020}, "SQ", "StructureSetROISequence"},
    {{0x3006, 0x0022}, "IS", "ROINumber"},
    {{0x3006, 0x0024}, "UI", "ReferencedFrameOfReferenceUID"},
    {{0x3006, 0x0026}, "LO", "ROIName"},
    {{0x3006, 0x0028}, "ST", "ROIDescription"},
    {{0x3006, 0x002A}, "IS", "ROIDisplayColor"},
    {{0x3006, 0x0036}, "CS", "ROIGenerationAlgorithm"},
    {{0x3006, 0x0039}, "SQ", "ROIContourSequence"},
    {{0x3006, 0x0040}, "SQ", "ContourSequence"},
    {{0x3006, 0x0042}, "CS", "ContourGeometricType"},
    {{0x3006, 0x0046}, "IS", "NumberOfContourPoints"},
    {{0x3006, 0x0048}, "IS", "ContourNumber"},
    {{0x3006, 0x0050}, "DS", "ContourData"},
    {{0x3006, 0x0080}, "SQ", "RTROIObservationsSequence"},
    {{0x3006, 0x0082}, "IS", "ObservationNumber"},
    {{0x3006, 0x0084}, "IS", "ReferencedROINumber"},
    {{0x3006, 0x0085}, "SH", "ROIObservationLabel"},
    {{0x3006, 0x00A4}, "CS", "RTROIInterpretedType"},
    {{0x3006, 0x00A6}, "PN", "ROIInterpreter"},
    {{0x5200, 0x9229}, "SQ", "SharedFunctionalGroupsSequence"},
    {{0x5200, 0x9230}, "SQ", "PerFrameFunctionalGroupsSequence"},
    {{0x7FE0, 0x0010}, "OW", "PixelData"},
});

constexpr auto sorted_by_tag() -> bool {
    for (std::size_t i = 1; i < kEntries.size(); ++i) {
        if (!(kEntries[i - 1].tag < kEntries[i].tag)) return false;
    }
    return true;
}
static_assert(sorted_by_tag(), "dictionary table must be sorted by tag");

auto find_entry(DicomTag tag) -> const DictionaryEntry* {
    const auto it = std::lower_bound(kEntries.begin(), kEntries.end(), tag,
                                     [](const DictionaryEntry& e, DicomTag t) { return e.tag < t; });
    return it != kEntries.end() && it->tag == tag ? &*it : nullptr;
}

}  // namespace

auto lookup_tag(DicomTag tag) -> TagInfo {
    if (const auto* e = find_entry(tag)) {
        return {std::string(e->keyword), Vr::of(e->vr)};
    }
    if (tag.element == 0x0000) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "GroupLength_%04X", tag.group);
        return {buf, vr::UL};
    }
    if (tag.is_private() && tag.element >= 0x0010 && tag.element <= 0x00FF) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "PrivateCreator_%04X_%04X", tag.group, tag.element);
        return {buf, vr::LO};
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "unknown_%04X_%04X", tag.group, tag.element);
    return {buf, vr::UN};
}

auto is_known_tag(DicomTag tag) -> bool { return find_entry(tag) != nullptr; }

auto find_keyword(std::string_view keyword) -> std::optional<DicomTag> {
    for (const auto& e : kEntries) {
        if (e.keyword == keyword) return e.tag;
    }
    return std::nullopt;
}

auto dictionary_entries() -> std::span<const DictionaryEntry> { return kEntries; }

}  // namespace curator::dicom
