File file = new File("data.txt");
BufferedReader br = new BufferedReader(new FileReader(file));
String line = br.readLine();
while (line != null) {
    System.out.println(line.trim());
    line = br.readLine();
}
br.close();
// parse simple name to fully qualified name
// the fully qualified name of close() is java.io.BufferedReader.close()
// the fully qualified name of readLine() is java.io.BufferedReader.readLine()
// the fully qualified name of line is java.lang.String
// the fully qualified name of BufferedReader() is java.io.BufferedReader()
// the fully qualified name of System is java.lang.System
// the fully qualified name of String is java.lang.String
// the fully qualified name of File is java.io.File
// the fully qualified name of FileReader() is java.io.FileReader()
// the fully qualified name of BufferedReader is java.io.BufferedReader
// the fully qualified name of trim() is java.lang.String.trim()
// the fully qualified name of out is java.lang.System.out
// the fully qualified name of File() is java.io.File()
// the fully qualified name of br is