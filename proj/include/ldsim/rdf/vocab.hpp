#pragma once

#include <string_view>

namespace ldsim::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kTime = "http://www.w3.org/2006/time#";
inline constexpr std::string_view kSosa = "http://www.w3.org/ns/sosa/";
inline constexpr std::string_view kSsn = "http://www.w3.org/ns/ssn/";
inline constexpr std::string_view kBrick = "http://buildsys.org/ontologies/Brick#";
inline constexpr std::string_view kBf = "http://buildsys.org/ontologies/BrickFrame#";
// Simulation vocabulary: run control, clock, task markers.
inline constexpr std::string_view kSim = "http://ldsim.example.org/sim#";

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfValue = "http://www.w3.org/1999/02/22-rdf-syntax-ns#value";
inline constexpr std::string_view kRdfFirst = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view kRdfRest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view kRdfNil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
inline constexpr std::string_view kRdfLangString = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view kRdfsSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";

inline constexpr std::string_view kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdInt = "http://www.w3.org/2001/XMLSchema#int";
inline constexpr std::string_view kXsdLong = "http://www.w3.org/2001/XMLSchema#long";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kXsdDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kXsdFloat = "http://www.w3.org/2001/XMLSchema#float";
inline constexpr std::string_view kXsdBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kXsdDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr std::string_view kXsdDateTimeStamp = "http://www.w3.org/2001/XMLSchema#dateTimeStamp";
inline constexpr std::string_view kXsdTime = "http://www.w3.org/2001/XMLSchema#time";

inline constexpr std::string_view kSosaObservableProperty = "http://www.w3.org/ns/sosa/ObservableProperty";
inline constexpr std::string_view kSosaActuatableProperty = "http://www.w3.org/ns/sosa/ActuatableProperty";
inline constexpr std::string_view kSosaObserves = "http://www.w3.org/ns/sosa/observes";
inline constexpr std::string_view kSosaActsOnProperty = "http://www.w3.org/ns/sosa/actsOnProperty";
inline constexpr std::string_view kSsnProperty = "http://www.w3.org/ns/ssn/Property";

inline constexpr std::string_view kBfHasPart = "http://buildsys.org/ontologies/BrickFrame#hasPart";
inline constexpr std::string_view kBfIsPartOf = "http://buildsys.org/ontologies/BrickFrame#isPartOf";
inline constexpr std::string_view kBfHasPoint = "http://buildsys.org/ontologies/BrickFrame#hasPoint";
inline constexpr std::string_view kBfIsPointOf = "http://buildsys.org/ontologies/BrickFrame#isPointOf";
inline constexpr std::string_view kBfFeeds = "http://buildsys.org/ontologies/BrickFrame#feeds";
inline constexpr std::string_view kBfIsFedBy = "http://buildsys.org/ontologies/BrickFrame#isFedBy";
inline constexpr std::string_view kBfIsLocatedIn = "http://buildsys.org/ontologies/BrickFrame#isLocatedIn";

inline constexpr std::string_view kRdfsComment = "http://www.w3.org/2000/01/rdf-schema#comment";
inline constexpr std::string_view kOwlClass = "http://www.w3.org/2002/07/owl#Class";

inline constexpr std::string_view kBrickBuilding = "http://buildsys.org/ontologies/Brick#Building";
inline constexpr std::string_view kBrickFloor = "http://buildsys.org/ontologies/Brick#Floor";
inline constexpr std::string_view kBrickWing = "http://buildsys.org/ontologies/Brick#Wing";
inline constexpr std::string_view kBrickRoom = "http://buildsys.org/ontologies/Brick#Room";
inline constexpr std::string_view kBrickLightingSystem = "http://buildsys.org/ontologies/Brick#Lighting_System";
inline constexpr std::string_view kBrickOccupancySensor = "http://buildsys.org/ontologies/Brick#Occupancy_Sensor";
inline constexpr std::string_view kBrickLuminanceCommand = "http://buildsys.org/ontologies/Brick#Luminance_Command";
inline constexpr std::string_view kBrickLuminanceSensor = "http://buildsys.org/ontologies/Brick#Luminance_Sensor";
inline constexpr std::string_view kBrickLuminanceSetpoint = "http://buildsys.org/ontologies/Brick#Luminance_Setpoint";

inline constexpr std::string_view kTimeInXSDDateTimeStamp = "http://www.w3.org/2006/time#inXSDDateTimeStamp";

inline constexpr std::string_view kSimSimulation = "http://ldsim.example.org/sim#Simulation";
inline constexpr std::string_view kSimCurrentIteration = "http://ldsim.example.org/sim#currentIteration";
inline constexpr std::string_view kSimCurrentTime = "http://ldsim.example.org/sim#currentTime";
inline constexpr std::string_view kSimTimeOfDay = "http://ldsim.example.org/sim#timeOfDay";
inline constexpr std::string_view kSimInitialTime = "http://ldsim.example.org/sim#initialTime";
inline constexpr std::string_view kSimTimeslotDuration = "http://ldsim.example.org/sim#timeslotDuration";
inline constexpr std::string_view kSimIterations = "http://ldsim.example.org/sim#iterations";
inline constexpr std::string_view kSimStepDuration = "http://ldsim.example.org/sim#stepDuration";
inline constexpr std::string_view kSimStatus = "http://ldsim.example.org/sim#status";
inline constexpr std::string_view kSimMeasures = "http://ldsim.example.org/sim#measures";
inline constexpr std::string_view kSimOutsideIlluminance = "http://ldsim.example.org/sim#OutsideIlluminance";
inline constexpr std::string_view kSimOccupant = "http://ldsim.example.org/sim#Occupant";
inline constexpr std::string_view kSimWorkplace = "http://ldsim.example.org/sim#workplace";

// Reserved name of the hidden default graph.
inline constexpr std::string_view kDefaultGraph = "urn:x-ldsim:default-graph";

// Path segment used for skolem IRIs.
inline constexpr std::string_view kGenidSegment = ".well-known/genid/";

}  // namespace ldsim::vocab
